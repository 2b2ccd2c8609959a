//! Values carried along tree paths.
//!
//! The spanner builder is generic over what it folds along the tree path
//! underlying each spanner edge: plain lengths for the spanner itself,
//! semigroup products for online tree product queries, maximum ranks for MST
//! verification.

/// A value attached to a directed tree path that can be extended and flipped.
pub trait PathValue: Clone {
    /// Value of the path `a -> m -> b`, where `self` covers `a -> m` and
    /// `next` covers `m -> b`.
    fn concat(&self, next: &Self) -> Self;

    /// Value of the same path walked the other way.
    fn reverse(&self) -> Self;
}

impl PathValue for f64 {
    fn concat(&self, next: &Self) -> Self {
        self + next
    }

    fn reverse(&self) -> Self {
        *self
    }
}

/// An associative binary operation.
pub trait Semigroup: Clone {
    fn op(&self, rhs: &Self) -> Self;
}

/// Forward and backward folds of a semigroup along one path.
///
/// For a path `a -> b` over tree edges `e1, ..., em` (in walking order),
/// `forward = e1 ∘ ... ∘ em` and `backward = em ∘ ... ∘ e1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Directed<S> {
    pub forward: S,
    pub backward: S,
}

impl<S: Clone> Directed<S> {
    /// Single tree edge carrying `value` in both directions.
    pub fn edge(value: S) -> Self {
        Directed {
            forward: value.clone(),
            backward: value,
        }
    }
}

impl<S: Semigroup> PathValue for Directed<S> {
    fn concat(&self, next: &Self) -> Self {
        Directed {
            forward: self.forward.op(&next.forward),
            backward: next.backward.op(&self.backward),
        }
    }

    fn reverse(&self) -> Self {
        Directed {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }
}

/// Maximum of integer ranks; symmetric, so reversal is a no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaxRank(pub u32);

impl PathValue for MaxRank {
    fn concat(&self, next: &Self) -> Self {
        MaxRank(self.0.max(next.0))
    }

    fn reverse(&self) -> Self {
        *self
    }
}

/// String concatenation; the canonical non-commutative test semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concat(pub String);

impl Semigroup for Concat {
    fn op(&self, rhs: &Self) -> Self {
        let mut s = String::with_capacity(self.0.len() + rhs.0.len());
        s.push_str(&self.0);
        s.push_str(&rhs.0);
        Concat(s)
    }
}

/// Numeric maximum.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Max(pub f64);

impl Semigroup for Max {
    fn op(&self, rhs: &Self) -> Self {
        Max(self.0.max(rhs.0))
    }
}

/// Numeric minimum.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Min(pub f64);

impl Semigroup for Min {
    fn op(&self, rhs: &Self) -> Self {
        Min(self.0.min(rhs.0))
    }
}

/// Numeric sum.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sum(pub f64);

impl Semigroup for Sum {
    fn op(&self, rhs: &Self) -> Self {
        Sum(self.0 + rhs.0)
    }
}

/// 2x2 integer matrices under multiplication modulo 97.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[u32; 2]; 2]);

impl Mat2 {
    pub const MODULUS: u32 = 97;

    pub fn identity() -> Self {
        Mat2([[1, 0], [0, 1]])
    }
}

impl Semigroup for Mat2 {
    fn op(&self, rhs: &Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        let m = Self::MODULUS;
        let mut out = [[0u32; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % m;
            }
        }
        Mat2(out)
    }
}
