use std::fmt::Debug;

/// Commutative ring operations used by the generic engines.
///
/// Values carry their own context (field, curve), so the neutral elements are
/// produced from an existing value.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    /// Image of an integer under `Z -> R`.
    fn int_image(&self, n: i64) -> Self;

    fn power(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.times(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait FieldLike: Ring {
    fn try_inverse(&self) -> Option<Self>;
}
