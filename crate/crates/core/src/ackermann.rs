//! Ackermann-style row functions and their inverses.
//!
//! Every tower is evaluated against a saturation cap: a value that would
//! exceed the cap is reported as [`SaturatingNat::saturated`] instead of being
//! computed. The inverses only ever ask "is the row value at least `n`", so a
//! cap of `n` is enough and no big-integer arithmetic is needed.
//!
//! Row functions:
//!
//! * `A(0, n) = 2n`, `A(k, 0) = 1`, `A(k, n) = A(k-1, A(k, n-1))`
//! * `B(0, n) = n^2`, `B(k, 0) = 2`, `B(k, n) = B(k-1, B(k, n-1))`
//! * `P(1, j) = 2^j`, `P(i, 0) = P(i-1, 1)`, `P(i, j) = P(i-1, 2^(2^P(i, j-1)))`
//! * `T(0, j) = 2j`, `T(i, 0) = 0`, `T(i, 1) = 2`, `T(i, j) = T(i-1, T(i, j-1))`

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

/// A non-negative integer that may have overflowed an evaluation cap.
///
/// When `saturated` is set the true value is strictly greater than the cap
/// and `value` holds the cap itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SaturatingNat {
    value: u64,
    saturated: bool,
}

impl SaturatingNat {
    pub fn exact(value: u64) -> Self {
        SaturatingNat {
            value,
            saturated: false,
        }
    }

    pub fn over(cap: u64) -> Self {
        SaturatingNat {
            value: cap,
            saturated: true,
        }
    }

    fn from_capped(v: Option<u64>, cap: u64) -> Self {
        match v {
            Some(v) => SaturatingNat::exact(v),
            None => SaturatingNat::over(cap),
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// The exact value, if it did not saturate.
    pub fn get(&self) -> Option<u64> {
        (!self.saturated).then_some(self.value)
    }

    /// `self >= n`, valid whenever the cap used to produce `self` is at least `n`.
    pub fn at_least(&self, n: u64) -> bool {
        self.saturated || self.value >= n
    }
}

impl PartialOrd for SaturatingNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SaturatingNat {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.saturated, self.value).cmp(&(other.saturated, other.value))
    }
}

fn cap_check(v: u64, cap: u64) -> Option<u64> {
    (v <= cap).then_some(v)
}

// `None` means "greater than cap". Every row is strictly increasing in its
// second argument from 1 on, so once an inner value passes the cap the outer
// one does too and the loop can stop early.
fn a_capped(k: u32, n: u64, cap: u64) -> Option<u64> {
    if k == 0 {
        return n.checked_mul(2).and_then(|v| cap_check(v, cap));
    }
    let mut v = cap_check(1, cap)?;
    for _ in 0..n {
        v = a_capped(k - 1, v, cap)?;
    }
    Some(v)
}

fn b_capped(k: u32, n: u64, cap: u64) -> Option<u64> {
    if k == 0 {
        return n.checked_mul(n).and_then(|v| cap_check(v, cap));
    }
    let mut v = cap_check(2, cap)?;
    for _ in 0..n {
        v = b_capped(k - 1, v, cap)?;
    }
    Some(v)
}

fn p_capped(i: u32, j: u64, cap: u64) -> Option<u64> {
    debug_assert!(i >= 1);
    if i == 1 {
        return if j >= 64 {
            None
        } else {
            cap_check(1u64 << j, cap)
        };
    }
    if j == 0 {
        return p_capped(i - 1, 1, cap);
    }
    let prev = p_capped(i, j - 1, cap)?;
    // 2^(2^prev) overflows u64 from prev = 6 on; P(i-1, x) >= x then exceeds any cap.
    if prev >= 6 {
        return None;
    }
    let x = cap_check(1u64 << (1u64 << prev), cap)?;
    p_capped(i - 1, x, cap)
}

fn t_capped(i: u32, j: u64, cap: u64) -> Option<u64> {
    if i == 0 {
        return j.checked_mul(2).and_then(|v| cap_check(v, cap));
    }
    match j {
        0 => Some(0),
        1 => cap_check(2, cap),
        _ => {
            let mut v = cap_check(2, cap)?;
            for _ in 2..=j {
                v = t_capped(i - 1, v, cap)?;
            }
            Some(v)
        }
    }
}

/// `A(k, n)` capped at `cap`.
pub fn eval_a(k: u32, n: u64, cap: u64) -> SaturatingNat {
    SaturatingNat::from_capped(a_capped(k, n, cap), cap)
}

/// `B(k, n)` capped at `cap`.
pub fn eval_b(k: u32, n: u64, cap: u64) -> SaturatingNat {
    SaturatingNat::from_capped(b_capped(k, n, cap), cap)
}

/// Pettie's row function `P(i, j)` capped at `cap`; `i >= 1`.
pub fn eval_p(i: u32, j: u64, cap: u64) -> SaturatingNat {
    assert!(i >= 1, "P is defined for rows i >= 1");
    SaturatingNat::from_capped(p_capped(i, j, cap), cap)
}

/// Tarjan's variant `T(i, j)` capped at `cap`. Used as a test oracle for `A`.
pub fn eval_t(i: u32, j: u64, cap: u64) -> SaturatingNat {
    SaturatingNat::from_capped(t_capped(i, j, cap), cap)
}

/// Smallest `s >= 0` with `f(s) >= n`, for `f` non-decreasing.
/// Gallops to a bracket and then bisects.
fn min_reaching(f: impl Fn(u64) -> bool) -> u64 {
    if f(0) {
        return 0;
    }
    let mut lo = 0u64; // f(lo) false
    let mut hi = 1u64;
    while !f(hi) {
        lo = hi;
        hi = hi.checked_mul(2).expect("row function never reaches n");
    }
    // invariant: !f(lo), f(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `α_k(n)`: for even `k = 2r` the least `s` with `A(r, s) >= n`,
/// for odd `k = 2r + 1` the least `s` with `B(r, s) >= n`.
pub fn alpha_k(k: u32, n: u64) -> u64 {
    let cap = n.max(1);
    let row = k / 2;
    if k.is_multiple_of(2) {
        min_reaching(|s| eval_a(row, s, cap).at_least(n))
    } else {
        min_reaching(|s| eval_b(row, s, cap).at_least(n))
    }
}

// Recursive calls land on small arguments, so only those are worth keeping.
const MEMO_LIMIT: u64 = 1 << 16;

fn prime_memo() -> &'static Mutex<HashMap<(u32, u64), u64>> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, u64), u64>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The constructive variant `α'_k(n)` driving the spanner recursion.
///
/// `α'_0 = α_0`, `α'_1 = α_1`, `α'_k(n) = α_k(n)` for `n <= k + 1`, and
/// `α'_k(n) = 2 + α'_k(α'_{k-2}(n))` otherwise.
pub fn alpha_prime(k: u32, n: u64) -> u64 {
    if k <= 1 || n <= k as u64 + 1 {
        return alpha_k(k, n);
    }
    if let Some(&v) = prime_memo().lock().unwrap().get(&(k, n)) {
        return v;
    }
    let inner = alpha_prime(k - 2, n);
    debug_assert!(inner < n, "α'_{}({}) = {} does not shrink", k - 2, n, inner);
    let v = 2 + alpha_prime(k, inner);
    if n <= MEMO_LIMIT {
        prime_memo().lock().unwrap().insert((k, n), v);
    }
    v
}

/// Inverse of the diagonal `A(s, s)`: the least `s` with `A(s, s) >= n`.
/// `α(0) = 0` since `A(0, 0) = 0`.
pub fn alpha_inv(n: u64) -> u64 {
    let cap = n.max(1);
    (0u64..)
        .find(|&s| eval_a(s as u32, s, cap).at_least(n))
        .expect("diagonal is unbounded")
}

/// Pettie's row inverse `λ_i(n)`: the least `j` with `P(i, j) >= n`; `i >= 1`.
pub fn lambda_i(i: u32, n: u64) -> u64 {
    let cap = n.max(1);
    (0u64..)
        .find(|&j| eval_p(i, j, cap).at_least(n))
        .expect("row is unbounded")
}

/// `⌈log₂ n⌉` for `n >= 1`, and 0 for `n = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}
