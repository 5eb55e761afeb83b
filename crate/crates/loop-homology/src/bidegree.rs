//! Bidegrees, windows, and differential directions.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A position `(p, q)` in a bigraded lattice.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { p: 0, q: 0 };

    pub fn new(p: i64, q: i64) -> Self {
        Bidegree { p, q }
    }

    /// Total degree `p + q`; this is the shifted loop-homology grading.
    pub fn total(&self) -> i64 {
        self.p + self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }
}

impl fmt::Debug for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.p, -self.q)
    }
}

impl Mul<i64> for Bidegree {
    type Output = Bidegree;
    fn mul(self, rhs: i64) -> Bidegree {
        Bidegree::new(self.p * rhs, self.q * rhs)
    }
}

/// Direction of the differentials on a page.
///
/// Homological pages live in the second quadrant (`p <= 0 <= q`) and carry
/// `d_r: (p, q) -> (p - r, q + r - 1)`. Cohomological pages live in the
/// first quadrant and carry `d^r: (p, q) -> (p + r, q - r + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Variance {
    Homological,
    Cohomological,
}

impl Variance {
    /// Target bidegree of the page-`r` differential out of `bd`.
    pub fn shift(&self, bd: Bidegree, r: u32) -> Bidegree {
        let r = r as i64;
        match self {
            Variance::Homological => Bidegree::new(bd.p - r, bd.q + r - 1),
            Variance::Cohomological => Bidegree::new(bd.p + r, bd.q - r + 1),
        }
    }

    /// Source bidegree of the page-`r` differential into `bd`.
    pub fn unshift(&self, bd: Bidegree, r: u32) -> Bidegree {
        let r = r as i64;
        match self {
            Variance::Homological => Bidegree::new(bd.p + r, bd.q - r + 1),
            Variance::Cohomological => Bidegree::new(bd.p - r, bd.q + r - 1),
        }
    }

    /// True when `bd` lies outside the quadrant this variance supports.
    pub fn outside_quadrant(&self, bd: Bidegree) -> bool {
        match self {
            Variance::Homological => bd.p > 0 || bd.q < 0,
            Variance::Cohomological => bd.p < 0 || bd.q < 0,
        }
    }
}

impl fmt::Display for Variance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variance::Homological => write!(f, "homological"),
            Variance::Cohomological => write!(f, "cohomological"),
        }
    }
}

/// A finite rectangle of bidegrees.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Window {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl Window {
    pub fn new(p_min: i64, p_max: i64, q_min: i64, q_max: i64) -> Self {
        Window {
            p_min,
            p_max,
            q_min,
            q_max,
        }
    }

    /// The empty window; every operation is total on it.
    pub fn empty() -> Self {
        Window {
            p_min: 0,
            p_max: -1,
            q_min: 0,
            q_max: -1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.p_min > self.p_max || self.q_min > self.q_max
    }

    pub fn contains(&self, bd: Bidegree) -> bool {
        bd.p >= self.p_min && bd.p <= self.p_max && bd.q >= self.q_min && bd.q <= self.q_max
    }

    /// Iterate all bidegrees in the window, ordered by `(p, q)`.
    pub fn iter(&self) -> impl Iterator<Item = Bidegree> + '_ {
        let (p_min, p_max, q_min, q_max) = (self.p_min, self.p_max, self.q_min, self.q_max);
        (p_min..=p_max).flat_map(move |p| (q_min..=q_max).map(move |q| Bidegree::new(p, q)))
    }

    /// Largest coordinate magnitude, used to bound exponent enumeration.
    pub fn p_extent(&self) -> i64 {
        self.p_min.abs().max(self.p_max.abs())
    }

    pub fn q_extent(&self) -> i64 {
        self.q_min.abs().max(self.q_max.abs())
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p in [{}, {}], q in [{}, {}]",
            self.p_min, self.p_max, self.q_min, self.q_max
        )
    }
}
