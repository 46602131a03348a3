//! Deterministic random source and the exact samplers built on it.
//!
//! SplitMix64 core. Replica streams are derived from (seed, replica index)
//! by a counter construction, so simulations are reproducible independent of
//! how replicas are scheduled across workers.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct RandomSource {
    state: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { state: seed }
    }

    /// Stream for one replica: state keyed by both seed and index, so streams
    /// neither overlap for consecutive replicas nor depend on worker layout.
    pub fn for_replica(seed: u64, replica: u64) -> Self {
        let key = mix(seed)
            ^ mix(replica
                .wrapping_mul(GOLDEN)
                .wrapping_add(0x1234_5678_9ABC_DEF1));
        RandomSource { state: mix(key) }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal via the Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang rejection; shape < 1 uses the
    /// boosting step Gamma(a) = Gamma(a+1) · U^{1/a}.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let boost = self.uniform().powf(1.0 / shape);
            return self.gamma(shape + 1.0) * boost;
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// Beta(a, b) on (0, 1): closed-form inverses where they exist, the
    /// two-Gamma construction otherwise.
    pub fn beta(&mut self, a: f64, b: f64) -> f64 {
        debug_assert!(a > 0.0 && b > 0.0);
        if a == 1.0 && b == 1.0 {
            self.uniform()
        } else if a == 0.5 && b == 0.5 {
            let s = (std::f64::consts::FRAC_PI_2 * self.uniform()).sin();
            s * s
        } else if a == 1.0 {
            1.0 - (1.0 - self.uniform()).powf(1.0 / b)
        } else if b == 1.0 {
            self.uniform().powf(1.0 / a)
        } else {
            loop {
                let x = self.gamma(a);
                let y = self.gamma(b);
                if x + y > 0.0 {
                    return x / (x + y);
                }
            }
        }
    }
}
