//! Finitely generated abelian groups in canonical form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A finitely generated abelian group: free rank plus ordered torsion
/// coefficients satisfying the divisibility chain `t[i] | t[i+1]`.
///
/// The canonical form is unique, so equality of groups is structural
/// equality of the representation.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// Build a group, canonicalizing the torsion list into a divisibility
    /// chain. Entries `<= 1` are rejected.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        for t in &torsion {
            assert!(t > &BigInt::one(), "torsion coefficient must be >= 2");
        }
        AbelianGroup {
            free_rank,
            torsion: canonical_chain(&torsion),
        }
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 2, "cyclic group order must be >= 2 (use free for Z)");
        AbelianGroup {
            free_rank: 0,
            torsion: vec![BigInt::from(n)],
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of canonical generators (free plus torsion).
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Direct sum, re-canonicalized.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        AbelianGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion: canonical_chain(&torsion),
        }
    }

    /// Forget torsion; what the group becomes with rational coefficients.
    pub fn free_part(&self) -> AbelianGroup {
        AbelianGroup::free(self.free_rank)
    }

    /// Display helper: the torsion part split into prime-power cyclic
    /// summands, e.g. `Z/6` becomes `[(2, 1), (3, 1)]` meaning `2^1, 3^1`.
    pub fn prime_power_factors(&self) -> Vec<(BigInt, u32)> {
        let mut out = Vec::new();
        for t in &self.torsion {
            out.extend(factorize(t));
        }
        out.sort();
        out
    }
}

/// Recombine arbitrary torsion coefficients into the divisibility chain.
fn canonical_chain(torsion: &[BigInt]) -> Vec<BigInt> {
    // Elementary divisors per prime, largest exponents grouped together.
    let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for t in torsion {
        for (p, e) in factorize(t) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let chain_len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![BigInt::one(); chain_len];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in exps.into_iter().enumerate() {
            // Largest exponent goes to the last invariant factor.
            let idx = chain_len - 1 - slot;
            chain[idx] *= p.pow(e);
        }
    }
    chain.retain(|c| !c.is_one());
    chain
}

/// Trial-division factorization; torsion coefficients here stay small.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    assert!(n > BigInt::one());
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
