//! Minimal double-double arithmetic.
//!
//! Used where a plain f64 sum would lose the target precision to
//! cancellation (the Bessel series at moderately large argument). Error-free
//! transforms follow Dekker/Knuth; products use 27-bit splitting so no FMA
//! is required.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const SPLIT: f64 = 134217729.0; // 2^27 + 1

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLIT * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    Dd { hi: p, lo: err }
}

impl Dd {
    #[allow(dead_code)] // used by the double-double test oracles
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two f64.
    #[inline]
    pub fn sum2(a: f64, b: f64) -> Dd {
        two_sum(a, b)
    }

    /// Exact product of two f64.
    #[inline]
    pub fn prod2(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let e = self.lo + o.lo + s.lo;
        quick_two_sum(s.hi, e)
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let e = p.lo + self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p.hi, e)
    }

    #[inline]
    pub fn mul_f64(self, s: f64) -> Dd {
        let p = two_prod(self.hi, s);
        quick_two_sum(p.hi, p.lo + self.lo * s)
    }

    /// Three-step Newton division self / o.
    #[inline]
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r1 = self.add(o.mul_f64(-q1));
        let q2 = r1.hi / o.hi;
        let r2 = r1.add(o.mul_f64(-q2));
        let q3 = r2.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}
