//! Seeded sampling grid.
//!
//! Sample `i` is the mixed-radix decomposition of the code
//! `(seed + i * stride) mod (r_0 * r_1 * ... )`, where `stride` is the first
//! integer `>= 1_000_003` coprime to the product of the radices. Every grid
//! point is visited exactly once per period, so a finite group is covered
//! completely once the sample count reaches its order. The scheme is linear on
//! purpose: it is trivially reproducible in any language.

const BASE_STRIDE: u128 = 1_000_003;

#[derive(Clone, Debug)]
pub struct LinearGrid {
    seed: u128,
    radices: Vec<u64>,
    period: u128,
    stride: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl LinearGrid {
    /// Radices must be non-zero.
    pub fn new(seed: u64, radices: Vec<u64>) -> Self {
        assert!(radices.iter().all(|&r| r > 0), "radices must be positive");
        let period = radices
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
            .unwrap_or(u128::MAX / BASE_STRIDE);
        let mut stride = BASE_STRIDE;
        while gcd(stride, period) != 1 {
            stride += 1;
        }
        LinearGrid { seed: seed as u128, radices, period, stride }
    }

    pub fn period(&self) -> u128 {
        self.period
    }

    /// Digits of sample `i`, digit `l` in `0..radices[l]`.
    pub fn point(&self, i: u64) -> Vec<u64> {
        let mut code = (self.seed % self.period + (i as u128 % self.period) * self.stride % self.period)
            % self.period;
        self.radices
            .iter()
            .map(|&r| {
                let d = code % r as u128;
                code /= r as u128;
                d as u64
            })
            .collect()
    }
}

/// Maps a digit in `0..2r+1` onto `-r..=r`.
pub fn centered(digit: u64, radius: u64) -> i64 {
    digit as i64 - radius as i64
}
