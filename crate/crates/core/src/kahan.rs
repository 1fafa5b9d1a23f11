//! Compensated (Kahan) accumulation and prefix-sum storage.

use crate::scalar::Real;

/// Kahan accumulator. `value()` folds the running compensation back in, so
/// the result is typically within half an ulp of the exact sum for the
/// positive, decreasing series handled here.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, term: T) {
        let y = term + self.comp;
        let t = self.sum + y;
        self.comp = y - (t - self.sum);
        self.sum = t;
    }

    /// Raw running sum, without the compensation term.
    #[inline]
    pub fn raw(&self) -> T {
        self.sum
    }

    /// Residual not yet absorbed into the running sum.
    #[inline]
    pub fn compensation(&self) -> T {
        self.comp
    }

    /// Compensated total.
    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Prefix sums `x_1 + ... + x_n` for `n = 1..=n_max`, with the compensation
/// recorded at every step. The raw sums are what downstream formulas operate
/// on; the compensations refine tail differences that would otherwise lose
/// their last bits.
#[derive(Clone, Debug)]
pub struct PrefixSums<T> {
    sums: Vec<T>,
    comps: Vec<T>,
}

impl<T: Real> PrefixSums<T> {
    /// Builds prefixes with a single sequential pass; `term(k)` supplies the
    /// k-th summand, `k` starting at 1.
    pub fn build(n_max: u64, mut term: impl FnMut(u64) -> T) -> Self {
        let len = usize::try_from(n_max).expect("n_max fits in usize");
        let mut sums = Vec::with_capacity(len);
        let mut comps = Vec::with_capacity(len);
        let mut acc = KahanSum::new();
        for k in 1..=n_max {
            acc.add(term(k));
            sums.push(acc.raw());
            comps.push(acc.compensation());
        }
        Self { sums, comps }
    }

    pub fn len(&self) -> u64 {
        self.sums.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// Raw running sum after `n` terms (1-based).
    #[inline]
    pub fn raw(&self, n: u64) -> T {
        self.sums[(n - 1) as usize]
    }

    /// Compensation alongside the raw sum after `n` terms.
    #[inline]
    pub fn compensation(&self, n: u64) -> T {
        self.comps[(n - 1) as usize]
    }

    /// Compensated value after `n` terms.
    #[inline]
    pub fn value(&self, n: u64) -> T {
        self.raw(n) + self.compensation(n)
    }

    pub fn raw_slice(&self) -> &[T] {
        &self.sums
    }
}
