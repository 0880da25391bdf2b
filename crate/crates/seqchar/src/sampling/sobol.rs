//! Sobol low-discrepancy sequence with direction numbers generated for 200
//! dimensions.
//!
//! Dimension 1 is the van der Corput sequence. Each further dimension pairs
//! the next primitive polynomial over GF(2) (degrees 1..=11, enumerated in
//! increasing order and verified primitive by checking the multiplicative
//! order of x) with odd initial direction values drawn from a fixed-seed
//! generator, then extends them with the standard recurrence. This keeps the
//! per-dimension stratification property of any valid Sobol net without
//! shipping a large table; the classic optimized tables would only improve
//! high-dimensional projections, which nothing downstream relies on.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

pub const MAX_DIMENSION: usize = 200;
const BITS: usize = 32;

/// Prime factors of 2^d - 1 for d = 1..=11, for primitivity testing
/// (2^1 - 1 = 1 has none).
const MERSENNE_FACTORS: [&[u32]; 12] = [
    &[],
    &[],
    &[3],
    &[7],
    &[3, 5],
    &[31],
    &[3, 7],
    &[127],
    &[3, 5, 17],
    &[7, 73],
    &[3, 11, 31],
    &[23, 89],
];

/// GF(2) polynomial multiplication modulo `modulus` (bit i = coefficient of x^i).
fn gf2_mulmod(a: u32, b: u32, modulus: u32) -> u32 {
    let deg = 31 - modulus.leading_zeros();
    let mut acc: u32 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> deg != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn gf2_powmod(base: u32, mut exp: u32, modulus: u32) -> u32 {
    let mut result = 1u32;
    let mut base = base;
    while exp != 0 {
        if exp & 1 != 0 {
            result = gf2_mulmod(result, base, modulus);
        }
        base = gf2_mulmod(base, base, modulus);
        exp >>= 1;
    }
    result
}

/// x generates the full multiplicative group of GF(2^d) iff its order is
/// exactly 2^d - 1.
fn is_primitive(poly: u32, degree: usize) -> bool {
    let order = (1u32 << degree) - 1;
    if gf2_powmod(0b10, order, poly) != 1 {
        return false;
    }
    for &factor in MERSENNE_FACTORS[degree] {
        if gf2_powmod(0b10, order / factor, poly) == 1 {
            return false;
        }
    }
    true
}

/// Primitive polynomials in increasing degree, then increasing value.
fn primitive_polynomials(count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    'degrees: for degree in 1..=11usize {
        let top = 1u32 << degree;
        for inner in 0..(1u32 << degree.saturating_sub(1)) {
            let poly = top | (inner << 1) | 1;
            if is_primitive(poly, degree) {
                out.push(poly);
                if out.len() == count {
                    break 'degrees;
                }
            }
        }
    }
    assert_eq!(out.len(), count, "not enough primitive polynomials");
    out
}

/// Direction integers v[dim][k], scaled so bit 31 is the leading bit.
fn direction_table() -> &'static Vec<[u32; BITS]> {
    static TABLE: OnceLock<Vec<[u32; BITS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(MAX_DIMENSION);
        // dimension 1: van der Corput, m_k = 1
        let mut v = [0u32; BITS];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = 1u32 << (BITS - 1 - k);
        }
        table.push(v);

        let polys = primitive_polynomials(MAX_DIMENSION - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EC5_0B01);
        for poly in polys {
            let degree = (31 - poly.leading_zeros()) as usize;
            let mut m = [0u64; BITS];
            for (k, slot) in m.iter_mut().enumerate().take(degree) {
                // odd and below 2^(k+1)
                *slot = (rng.gen_range(0u64..(1u64 << k)) << 1) | 1;
            }
            for k in degree..BITS {
                // m_k = 2 a_1 m_{k-1} ^ ... ^ 2^(s-1) a_{s-1} m_{k-s+1}
                //       ^ 2^s m_{k-s} ^ m_{k-s}
                let mut val = m[k - degree] ^ (m[k - degree] << degree);
                for j in 1..degree {
                    let a_j = (poly >> (degree - j)) & 1;
                    if a_j != 0 {
                        val ^= m[k - j] << j;
                    }
                }
                m[k] = val;
            }
            let mut v = [0u32; BITS];
            for k in 0..BITS {
                v[k] = (m[k] as u32) << (BITS - 1 - k);
            }
            table.push(v);
        }
        table
    })
}

/// Points 0..count of the given dimension block, Gray-code order, as raw
/// 32-bit integers (point / 2^32 is the usual [0,1) value).
pub fn sobol_integers(dimension: usize, count: usize) -> Vec<Vec<u32>> {
    assert!(dimension >= 1 && dimension <= MAX_DIMENSION);
    let table = direction_table();
    let mut rows = Vec::with_capacity(count);
    let mut state = vec![0u32; dimension];
    for i in 0..count {
        if i > 0 {
            let change = (i as u32).trailing_zeros() as usize;
            for (d, s) in state.iter_mut().enumerate() {
                *s ^= table[d][change];
            }
        }
        rows.push(state.clone());
    }
    rows
}

/// Hash-based Owen scrambling of one Sobol integer (nested uniform
/// scrambling in the Laine-Karras style). The key must differ per dimension.
pub fn owen_scramble(x: u32, key: u64) -> u32 {
    let mut v = x.reverse_bits();
    let h = splitmix64(key);
    v = v.wrapping_add(h as u32);
    v ^= v.wrapping_mul(0x6c50_b47c);
    v ^= v.wrapping_mul(0xb82f_1e52);
    v ^= v.wrapping_mul(0xc7af_e638);
    v ^= v.wrapping_mul(0x8d22_f6e6);
    v.reverse_bits()
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
