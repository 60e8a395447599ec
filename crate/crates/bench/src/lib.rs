//! Inputs shared by the benchmarks.

use minannih_core::{assemble, Assembled, Block, BlockSpec, Field, Poly, PrimeField, Residue, Similarity};

pub const PRIME: u64 = 32003;

pub fn field() -> PrimeField {
    PrimeField::new(PRIME).expect("prime modulus")
}

/// A conjugated `n × n` matrix whose characteristic polynomial is
/// `∏ (λ − c)^{m_c}` for `c = 1..=q`, with the `m_c` as equal as possible and
/// each factor split into two blocks.
pub fn workload(k: &PrimeField, n: usize, q: usize, seed: u64) -> Assembled<Residue> {
    assert!(q >= 1 && q <= n, "need 1 <= q <= n");
    let mut blocks = Vec::new();
    for c in 1..=q {
        let m = n / q + usize::from(c <= n % q);
        let f = Poly::linear(k, &k.from_i64(c as i64));
        for power in [m.div_ceil(2), m / 2].into_iter().filter(|&p| p > 0) {
            blocks.push(Block { f: f.clone(), power });
        }
    }
    assemble(k, &BlockSpec { blocks, similarity: Similarity::RandomUnimodular(seed) }).expect("valid workload")
}
