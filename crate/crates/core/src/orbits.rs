//! Dimension-level reduction for `s × ℓ` matrices: highest-weight monomials
//! in the leading minors `δ_1, …, δ_s`, unitary-group Weyl dimensions, and a
//! brute-force count of orthogonal-group invariants to compare against.

use std::collections::{BTreeMap, HashMap};

use num_integer::binomial;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::poly::Monomial;
use crate::prequant::{CostratifiedSpace, OperatorFamily};
use crate::scalar::{Rational, Scalar};

/// Exponents `(α, β, …, γ)` of `δ_1^α δ_2^β ⋯ δ_s^γ`.
pub type HwMonomial = Vec<u32>;

/// Non-increasing highest weight of `U(ℓ)`.
pub type Weight = Vec<u32>;

/// All exponent vectors with `α + 2β + ⋯ + sγ = k`, in lexicographic order.
pub fn enumerate_hw(s: usize, k: u32) -> Vec<HwMonomial> {
    fn go(j: usize, s: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<HwMonomial>) {
        if j == s {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = j as u32 + 1;
        for e in (0..=rest / w).rev() {
            cur.push(e);
            go(j + 1, s, rest - e * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, s, k, &mut Vec::with_capacity(s), &mut out);
    out
}

/// Torus weight of the product: `δ_j` contributes 2 to each of the first `j`
/// coordinates.
pub fn hw_weight(m: &HwMonomial, ell: usize) -> Weight {
    assert!(m.len() <= ell, "more minors than rows");
    (0..ell).map(|i| 2 * m.iter().skip(i).sum::<u32>()).collect()
}

/// Weyl dimension `∏_{i<j} (λ_i - λ_j + j - i) / (j - i)`.
pub fn weyl_dim(lambda: &Weight) -> u64 {
    let l = lambda.len();
    let mut num = Rational::one();
    for i in 0..l {
        for j in i + 1..l {
            let diff = lambda[i] as i64 - lambda[j] as i64 + (j - i) as i64;
            num *= Rational::new(diff.into(), ((j - i) as i64).into());
        }
    }
    num.to_integer().try_into().expect("dimension fits in u64")
}

/// `dim Ẽ^k_s = Σ weyl_dim(hw_weight(m))` over `enumerate_hw(s, k)`.
pub fn reduced_dim(ell: usize, s: usize, k: u32) -> u64 {
    enumerate_hw(s, k).iter().map(|m| weyl_dim(&hw_weight(m, ell))).sum()
}

/// `(dim Ẽ^k_s, dim Ẽ^k_{s-1}, dim of the kernel of restriction)`.
pub fn restriction_profile(ell: usize, s: usize, k: u32) -> (u64, u64, u64) {
    assert!(s >= 2 && s <= ell, "restriction needs 2 <= s <= ell");
    let top = reduced_dim(ell, s, k);
    let kernel =
        enumerate_hw(s, k).iter().filter(|m| m[s - 1] > 0).map(|m| weyl_dim(&hw_weight(m, ell))).sum();
    (top, reduced_dim(ell, s - 1, k), kernel)
}

pub const MAX_INVARIANT_VARS: usize = 6;
pub const MAX_INVARIANT_DEGREE: u32 = 10;

/// Dimension of the `O(s)`-invariants in `Sym^d` of `s` copies of the
/// standard representation of `O(s)` tensored with `C^ℓ` (variables
/// `y_{a,i}`, `a < s`, `i < ℓ`): the kernel of the `so(s)` generators together
/// with invariance under flipping the sign of row 0.
pub fn invariant_dim(ell: usize, s: usize, d: u32) -> Result<u64> {
    let n = s * ell;
    if n > MAX_INVARIANT_VARS || d > MAX_INVARIANT_DEGREE {
        let size = binomial(n as u64 + d as u64 - 1, d as u64);
        return Err(Error::Refused(format!(
            "invariant count for s*ell = {n}, degree {d} needs {size} monomials; \
             limits are s*ell <= {MAX_INVARIANT_VARS}, degree <= {MAX_INVARIANT_DEGREE}"
        )));
    }
    let var = |a: usize, i: usize| a * ell + i;
    let monos = Monomial::all_of_degree(n, d);
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|a| (a + 1..s).map(move |b| (a, b))).collect();
    let block = monos.len();

    // image of each monomial under every generator, stacked
    let columns: Vec<SparseVec<Rational>> = monos
        .par_iter()
        .map(|m| {
            let mut col: BTreeMap<usize, Rational> = BTreeMap::new();
            let mut add = |row: usize, c: Rational| {
                let e = col.entry(row).or_insert_with(Rational::zero);
                *e = e.clone() + c;
            };
            for (g, &(a, b)) in pairs.iter().enumerate() {
                // Σ_i y_{a,i} ∂_{b,i} - y_{b,i} ∂_{a,i}
                for i in 0..ell {
                    for (from, to, sign) in [(var(b, i), var(a, i), 1), (var(a, i), var(b, i), -1)] {
                        let e = m.0[from];
                        if e == 0 {
                            continue;
                        }
                        let mut out = m.0.clone();
                        out[from] -= 1;
                        out[to] += 1;
                        let row = (g + 1) * block + index[&Monomial(out)];
                        add(row, Rational::from_i64(sign * e as i64));
                    }
                }
            }
            let row0: u32 = (0..ell).map(|i| m.0[var(0, i)]).sum();
            if row0 % 2 == 1 {
                // (reflection - id) sends m to -2m
                add(index[m], Rational::from_i64(-2));
            }
            col.retain(|_, v| !v.is_zero());
            col
        })
        .collect();
    let mut ech = Echelon::new();
    for c in columns {
        let _ = ech.insert(c);
    }
    Ok((block - ech.rank()) as u64)
}

/// Quadratic Casimir eigenvalue `Σ λ_i (λ_i + ℓ + 1 - 2i)` (1-based `i`).
pub fn casimir(lambda: &Weight) -> i64 {
    let l = lambda.len() as i64;
    lambda.iter().enumerate().map(|(i, &x)| x as i64 * (x as i64 + l + 1 - 2 * (i as i64 + 1))).sum()
}

pub const MAX_EMIT_RANK: usize = 3;

/// The chain `Q_1 ≤ ⋯ ≤ Q_ℓ` with `Q_s = Ẽ^k_s` in the highest-weight block
/// basis; restriction `Q_s → Q_{s-1}` is the identity on blocks without `δ_s`
/// and kills the others. Each space carries the Casimir acting blockwise.
pub fn emit_costratified(ell: usize, k: u32) -> Result<CostratifiedSpace> {
    if ell == 0 || ell > MAX_EMIT_RANK {
        return Err(Error::Refused(format!("emit_costratified supports 1 <= ell <= {MAX_EMIT_RANK}, got {ell}")));
    }
    let label = |s: usize| format!("Q{s}");
    // per stratum: blocks (monomial, offset, dim)
    let blocks: Vec<Vec<(HwMonomial, usize, usize)>> = (1..=ell)
        .map(|s| {
            let mut off = 0;
            enumerate_hw(s, k)
                .into_iter()
                .map(|m| {
                    let d = weyl_dim(&hw_weight(&m, ell)) as usize;
                    let b = (m, off, d);
                    off += d;
                    b
                })
                .collect()
        })
        .collect();
    let dim_of = |s: usize| blocks[s - 1].iter().map(|b| b.2).sum::<usize>();
    let mut space = CostratifiedSpace {
        strata: (1..=ell).map(label).collect(),
        order: (2..=ell).map(|s| (label(s - 1), label(s))).collect(),
        dims: (1..=ell).map(|s| (label(s), dim_of(s))).collect(),
        maps: BTreeMap::new(),
        operators: OperatorFamily::new(),
    };
    for s in 2..=ell {
        let mut m = Matrix::zeros(dim_of(s - 1), dim_of(s));
        for (mono, off, d) in &blocks[s - 1] {
            if mono[s - 1] > 0 {
                continue;
            }
            let (_, low_off, _) =
                blocks[s - 2].iter().find(|(lm, _, _)| lm[..] == mono[..s - 1]).expect("block without delta_s");
            for t in 0..*d {
                m.set(low_off + t, off + t, Rational::one());
            }
        }
        space.maps.insert((label(s), label(s - 1)), m);
    }
    for s in 1..=ell {
        let mut c = Matrix::zeros(dim_of(s), dim_of(s));
        for (mono, off, d) in &blocks[s - 1] {
            let value = Rational::from_i64(casimir(&hw_weight(mono, ell)));
            for t in 0..*d {
                c.set(off + t, off + t, value.clone());
            }
        }
        space.operators.entry(label(s)).or_default().insert("casimir".into(), c);
    }
    Ok(space)
}

/// Dimension comparison emitted by the `costrat` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostratSummary {
    pub ell: usize,
    pub s: usize,
    pub k: u32,
    pub dims: Vec<u64>,
    pub kernel: Option<u64>,
    pub reduced_dim: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_dim: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_oracle_dim: Option<u64>,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub fn costrat_summary(ell: usize, s: usize, k: u32, oracle: bool) -> Result<CostratSummary> {
    if s == 0 || s > ell {
        return Err(Error::Refused(format!("need 1 <= s <= ell, got s = {s}, ell = {ell}")));
    }
    let dims: Vec<u64> = (1..=s).map(|t| reduced_dim(ell, t, k)).collect();
    let kernel = (s >= 2).then(|| restriction_profile(ell, s, k).2);
    let reduced = reduced_dim(ell, s, k);
    let (oracle_dim, odd) = if oracle {
        let even = invariant_dim(ell, s, 2 * k)?;
        let odd = if k > 0 { Some(invariant_dim(ell, s, 2 * k - 1)?) } else { None };
        (Some(even), odd)
    } else {
        (None, None)
    };
    let matches = oracle_dim.is_none_or(|o| o == reduced) && odd.is_none_or(|o| o == 0);
    Ok(CostratSummary { ell, s, k, dims, kernel, reduced_dim: reduced, oracle_dim, odd_oracle_dim: odd, matches })
}
