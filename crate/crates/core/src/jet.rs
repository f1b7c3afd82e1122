//! Truncated multivariate jets: value plus exact partial derivatives up to
//! order 3, with Taylor arithmetic.
//!
//! Second- and third-order tiers are stored packed over sorted index tuples
//! (`i <= j`, `i <= j <= k`), so mixed-partial symmetry holds by
//! construction. Mixed-order arithmetic truncates to the lower order.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Highest derivative tier carried by a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Zero,
    One,
    Two,
    Three,
}

impl Order {
    pub fn as_usize(self) -> usize {
        match self {
            Order::Zero => 0,
            Order::One => 1,
            Order::Two => 2,
            Order::Three => 3,
        }
    }

    pub fn from_usize(k: usize) -> Option<Order> {
        Some(match k {
            0 => Order::Zero,
            1 => Order::One,
            2 => Order::Two,
            3 => Order::Three,
            _ => return None,
        })
    }

    fn lower(self) -> Order {
        match self {
            Order::Zero | Order::One => Order::Zero,
            Order::Two => Order::One,
            Order::Three => Order::Two,
        }
    }
}

fn len2(n: usize) -> usize {
    n * (n + 1) / 2
}

fn len3(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

/// A jet: value and symmetric partial-derivative tiers.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    n: usize,
    order: Order,
    value: T,
    d1: Vec<T>,
    d2: Vec<T>,
    d3: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    /// Constant jet: all derivatives vanish.
    pub fn constant(value: T, n: usize, order: Order) -> Jet<T> {
        let z = T::zero();
        Jet {
            n,
            order,
            value,
            d1: if order >= Order::One { vec![z; n] } else { Vec::new() },
            d2: if order >= Order::Two { vec![z; len2(n)] } else { Vec::new() },
            d3: if order >= Order::Three { vec![z; len3(n)] } else { Vec::new() },
        }
    }

    /// Seed jet for coordinate `i`: unit first derivative in slot `i`.
    pub fn variable(value: T, i: usize, n: usize, order: Order) -> Jet<T> {
        let mut j = Jet::constant(value, n, order);
        if order >= Order::One {
            j.d1[i] = T::one();
        }
        j
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn value(&self) -> T {
        self.value
    }

    /// First partial with respect to coordinate `i`.
    pub fn d1(&self, i: usize) -> T {
        self.d1[i]
    }

    /// Second partial; index order is irrelevant.
    pub fn d2(&self, i: usize, j: usize) -> T {
        self.d2[pair_index(self.n, i, j)]
    }

    /// Third partial; index order is irrelevant.
    pub fn d3(&self, i: usize, j: usize, k: usize) -> T {
        self.d3[triple_index(self.n, i, j, k)]
    }

    /// The jet of `opartial f / opartial x_i`, one order lower.
    ///
    /// Requires `order >= 1`.
    pub fn partial(&self, i: usize) -> Jet<T> {
        assert!(self.order >= Order::One, "partial() needs order >= 1");
        let n = self.n;
        let order = self.order.lower();
        let mut out = Jet::constant(self.d1[i], n, order);
        if order >= Order::One {
            for j in 0..n {
                out.d1[j] = self.d2(i, j);
            }
        }
        if order >= Order::Two {
            for j in 0..n {
                for k in j..n {
                    out.d2[pair_index(n, j, k)] = self.d3(i, j, k);
                }
            }
        }
        out
    }

    fn joint_order(&self, other: &Jet<T>) -> Order {
        assert_eq!(self.n, other.n, "jet dimension mismatch");
        self.order.min(other.order)
    }

    pub fn neg(&self) -> Jet<T> {
        let mut out = self.clone();
        out.value = -out.value;
        for v in out.d1.iter_mut().chain(out.d2.iter_mut()).chain(out.d3.iter_mut()) {
            *v = -*v;
        }
        out
    }

    pub fn add(&self, other: &Jet<T>) -> Jet<T> {
        let order = self.joint_order(other);
        let mut out = Jet::constant(self.value + other.value, self.n, order);
        for (o, (a, b)) in out.d1.iter_mut().zip(self.d1.iter().zip(&other.d1)) {
            *o = *a + *b;
        }
        for (o, (a, b)) in out.d2.iter_mut().zip(self.d2.iter().zip(&other.d2)) {
            *o = *a + *b;
        }
        for (o, (a, b)) in out.d3.iter_mut().zip(self.d3.iter().zip(&other.d3)) {
            *o = *a + *b;
        }
        out
    }

    pub fn sub(&self, other: &Jet<T>) -> Jet<T> {
        self.add(&other.neg())
    }

    /// Truncated Leibniz product.
    pub fn mul(&self, other: &Jet<T>) -> Jet<T> {
        let order = self.joint_order(other);
        let n = self.n;
        let (a, b) = (self, other);
        let mut out = Jet::constant(a.value * b.value, n, order);
        if order >= Order::One {
            for i in 0..n {
                out.d1[i] = a.d1[i] * b.value + a.value * b.d1[i];
            }
        }
        if order >= Order::Two {
            let mut idx = 0;
            for i in 0..n {
                for j in i..n {
                    out.d2[idx] = a.d2(i, j) * b.value
                        + a.d1[i] * b.d1[j]
                        + a.d1[j] * b.d1[i]
                        + a.value * b.d2(i, j);
                    idx += 1;
                }
            }
        }
        if order >= Order::Three {
            let mut idx = 0;
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        out.d3[idx] = a.d3(i, j, k) * b.value
                            + a.value * b.d3(i, j, k)
                            + a.d1[i] * b.d2(j, k)
                            + a.d1[j] * b.d2(i, k)
                            + a.d1[k] * b.d2(i, j)
                            + a.d2(j, k) * b.d1[i]
                            + a.d2(i, k) * b.d1[j]
                            + a.d2(i, j) * b.d1[k];
                        idx += 1;
                    }
                }
            }
        }
        out
    }

    pub fn div(&self, other: &Jet<T>) -> Result<Jet<T>> {
        if other.value == T::zero() {
            return Err(Error::Domain { function: "/", value: 0.0 });
        }
        let v = other.value;
        let v2 = v * v;
        let one = T::one();
        let two = T::from_f64_lossy(2.0);
        let six = T::from_f64_lossy(6.0);
        let inv = other.compose(one / v, -one / v2, two / (v2 * v), -six / (v2 * v2));
        Ok(self.mul(&inv))
    }

    /// Multiply by a plain scalar.
    pub fn scale(&self, s: T) -> Jet<T> {
        let mut out = self.clone();
        out.value = out.value * s;
        for v in out.d1.iter_mut().chain(out.d2.iter_mut()).chain(out.d3.iter_mut()) {
            *v = *v * s;
        }
        out
    }

    /// Chain rule through a scalar function with derivatives `f1..f3` at the value.
    fn compose(&self, f0: T, f1: T, f2: T, f3: T) -> Jet<T> {
        let n = self.n;
        let order = self.order;
        let u = self;
        let mut out = Jet::constant(f0, n, order);
        if order >= Order::One {
            for i in 0..n {
                out.d1[i] = f1 * u.d1[i];
            }
        }
        if order >= Order::Two {
            let mut idx = 0;
            for i in 0..n {
                for j in i..n {
                    out.d2[idx] = f2 * u.d1[i] * u.d1[j] + f1 * u.d2(i, j);
                    idx += 1;
                }
            }
        }
        if order >= Order::Three {
            let mut idx = 0;
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        out.d3[idx] = f3 * u.d1[i] * u.d1[j] * u.d1[k]
                            + f2 * (u.d2(i, j) * u.d1[k]
                                + u.d2(i, k) * u.d1[j]
                                + u.d2(j, k) * u.d1[i])
                            + f1 * u.d3(i, j, k);
                        idx += 1;
                    }
                }
            }
        }
        out
    }

    pub fn exp(&self) -> Jet<T> {
        let e = self.value.exp();
        self.compose(e, e, e, e)
    }

    pub fn ln(&self) -> Result<Jet<T>> {
        let v = self.value;
        if v <= T::zero() {
            return Err(Error::Domain { function: "ln", value: v.to_f64_lossy() });
        }
        let one = T::one();
        let two = T::from_f64_lossy(2.0);
        Ok(self.compose(v.ln(), one / v, -one / (v * v), two / (v * v * v)))
    }

    pub fn sin(&self) -> Jet<T> {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s, -c)
    }

    pub fn cos(&self) -> Jet<T> {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c, s)
    }

    pub fn tan(&self) -> Jet<T> {
        let t = self.value.tan();
        let one = T::one();
        let two = T::from_f64_lossy(2.0);
        let s = one + t * t;
        self.compose(t, s, two * t * s, two * s * (s + two * t * t))
    }

    pub fn sinh(&self) -> Jet<T> {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(s, c, s, c)
    }

    pub fn cosh(&self) -> Jet<T> {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(c, s, c, s)
    }

    pub fn tanh(&self) -> Jet<T> {
        let t = self.value.tanh();
        let one = T::one();
        let two = T::from_f64_lossy(2.0);
        let s = one - t * t;
        self.compose(t, s, -two * t * s, -two * s * (s - two * t * t))
    }

    pub fn sqrt(&self) -> Result<Jet<T>> {
        let v = self.value;
        if v < T::zero() || (v == T::zero() && self.order >= Order::One) {
            return Err(Error::Domain { function: "sqrt", value: v.to_f64_lossy() });
        }
        if v == T::zero() {
            return Ok(Jet::constant(T::zero(), self.n, self.order));
        }
        let r = v.sqrt();
        let half = T::from_f64_lossy(0.5);
        let f1 = half / r;
        let f2 = -f1 / (T::from_f64_lossy(2.0) * v);
        let f3 = T::from_f64_lossy(3.0) / (T::from_f64_lossy(8.0) * r * v * v);
        Ok(self.compose(r, f1, f2, f3))
    }

    /// Raise to a constant power.
    ///
    /// Integer exponents use `powi` and short-circuit vanished derivative
    /// coefficients, so polynomials stay exact at the origin. Non-integer
    /// exponents require a strictly positive base.
    pub fn powc(&self, c: T) -> Result<Jet<T>> {
        let v = self.value;
        let is_int = c.fract() == T::zero() && c.abs() <= T::from_f64_lossy(2147483647.0);
        if is_int {
            let ci = c.to_f64_lossy() as i32;
            if v == T::zero() && ci < 0 {
                return Err(Error::Domain { function: "^", value: 0.0 });
            }
            // derivative factors c, c(c-1), c(c-1)(c-2); a zero factor kills
            // the whole term regardless of the (possibly singular) power
            let mut fs = [T::zero(); 4];
            fs[0] = pow_checked(v, ci);
            let mut coeff = T::one();
            for (m, f) in fs.iter_mut().enumerate().skip(1) {
                coeff = coeff * (c - T::from_f64_lossy((m - 1) as f64));
                *f = if coeff == T::zero() {
                    T::zero()
                } else {
                    coeff * pow_checked(v, ci - m as i32)
                };
            }
            return Ok(self.compose(fs[0], fs[1], fs[2], fs[3]));
        }
        if v <= T::zero() {
            return Err(Error::Domain { function: "^", value: v.to_f64_lossy() });
        }
        let one = T::one();
        let two = T::from_f64_lossy(2.0);
        let f0 = v.powf(c);
        let f1 = c * v.powf(c - one);
        let f2 = c * (c - one) * v.powf(c - two);
        let f3 = c * (c - one) * (c - two) * v.powf(c - two - one);
        Ok(self.compose(f0, f1, f2, f3))
    }
}

fn pow_checked<T: Scalar>(v: T, e: i32) -> T {
    if v == T::zero() && e < 0 {
        // callers only reach this guarded by a zero coefficient
        T::zero()
    } else {
        v.powi(e)
    }
}

/// Packed index of an unordered pair.
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // row offset: sum of row lengths n, n-1, ..., n-i+1
    i * (2 * n - i + 1) / 2 + (j - i)
}

/// Packed index of an unordered triple.
pub(crate) fn triple_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    let mut t = [i, j, k];
    t.sort_unstable();
    let [i, j, k] = t;
    let mut base = 0;
    for a in 0..i {
        let m = n - a;
        base += m * (m + 1) / 2;
    }
    base + pair_index(n - i, j - i, k - i)
}
