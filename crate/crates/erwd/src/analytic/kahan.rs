//! Compensated summation for the long moment recursions.

/// Kahan accumulator; keeps the relative error of million-term sums near
/// machine epsilon instead of letting it grow linearly.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new(value: f64) -> Self {
        Self { sum: value, carry: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}
