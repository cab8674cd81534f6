//! Quantities affine in the metric parameters `t` and `s`.

use std::fmt;

use super::scalar::Scalar;

/// `c0 + ct·t + cs·s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<T> {
    pub c0: T,
    pub ct: T,
    pub cs: T,
}

impl<T: Scalar> Affine<T> {
    pub fn constant(c0: T) -> Self {
        Affine {
            c0,
            ct: T::zero(),
            cs: T::zero(),
        }
    }

    pub fn t(ct: T) -> Self {
        Affine {
            c0: T::zero(),
            ct,
            cs: T::zero(),
        }
    }

    pub fn s(cs: T) -> Self {
        Affine {
            c0: T::zero(),
            ct: T::zero(),
            cs,
        }
    }

    pub fn eval(&self, t: &T, s: &T) -> T {
        self.c0.clone() + self.ct.clone() * t.clone() + self.cs.clone() * s.clone()
    }

    pub fn add(&self, o: &Self) -> Self {
        Affine {
            c0: self.c0.clone() + o.c0.clone(),
            ct: self.ct.clone() + o.ct.clone(),
            cs: self.cs.clone() + o.cs.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn scale(&self, k: &T) -> Self {
        Affine {
            c0: self.c0.clone() * k.clone(),
            ct: self.ct.clone() * k.clone(),
            cs: self.cs.clone() * k.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.ct.is_zero() && self.cs.is_zero()
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Affine<S> {
        Affine {
            c0: f(&self.c0),
            ct: f(&self.ct),
            cs: f(&self.cs),
        }
    }
}

impl<T: Scalar> fmt::Display for Affine<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.c0.is_zero() {
            parts.push(self.c0.to_string());
        }
        for (c, name) in [(&self.ct, "t"), (&self.cs, "s")] {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(name.to_string());
            } else if *c == -T::one() {
                parts.push(format!("-{name}"));
            } else {
                parts.push(format!("{c}{name}"));
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}
