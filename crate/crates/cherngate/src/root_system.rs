//! Cartan data for the finite crystallographic types: simple roots, coroots,
//! fundamental weights, the full set of positive roots, and the pairing
//! against coroots.
//!
//! Everything is stored in the fundamental-weight basis, in which the pairing
//! with simple coroots just reads off coordinates. Root-basis coordinates are
//! carried alongside each root so positivity is a sign check.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A product of simple types, e.g. `A2` or `A1xC3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanType(pub Vec<(Family, usize)>);

const MAX_TOTAL_RANK: usize = 16;

impl CartanType {
    pub fn rank(&self) -> usize {
        self.0.iter().map(|&(_, r)| r).sum()
    }

    /// Number of positive roots, from the classical counts.
    pub fn num_positive_roots(&self) -> usize {
        self.0
            .iter()
            .map(|&(fam, r)| match fam {
                Family::A => r * (r + 1) / 2,
                Family::B | Family::C => r * r,
                Family::D => r * (r - 1),
                Family::E => match r {
                    6 => 36,
                    7 => 63,
                    _ => 120,
                },
                Family::F => 24,
                Family::G => 6,
            })
            .sum()
    }

    /// Order of the Weyl group, from the classical formulas.
    pub fn weyl_order(&self) -> BigUint {
        let mut total = BigUint::from(1u32);
        for &(fam, r) in &self.0 {
            let factorial = |n: usize| -> BigUint {
                let mut f = BigUint::from(1u32);
                for k in 2..=n {
                    f *= BigUint::from(k);
                }
                f
            };
            let part: BigUint = match fam {
                Family::A => factorial(r + 1),
                Family::B | Family::C => BigUint::from(2u32).pow(r as u32) * factorial(r),
                Family::D => BigUint::from(2u32).pow(r as u32 - 1) * factorial(r),
                Family::E => match r {
                    6 => BigUint::from(51840u32),
                    7 => BigUint::from(2903040u32),
                    _ => BigUint::from(696729600u32),
                },
                Family::F => BigUint::from(1152u32),
                Family::G => BigUint::from(12u32),
            };
            total *= part;
        }
        total
    }

    fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidCartanType("empty type".into()));
        }
        for &(fam, r) in &self.0 {
            let ok = match fam {
                Family::A => r >= 1,
                Family::B | Family::C => r >= 2,
                Family::D => r >= 3,
                Family::E => (6..=8).contains(&r),
                Family::F => r == 4,
                Family::G => r == 2,
            };
            if !ok {
                return Err(Error::InvalidCartanType(format!(
                    "rank {r} is not valid for family {fam}"
                )));
            }
        }
        if self.rank() > MAX_TOTAL_RANK {
            return Err(Error::InvalidCartanType(format!(
                "total rank {} exceeds the supported bound {MAX_TOTAL_RANK}",
                self.rank()
            )));
        }
        Ok(())
    }

    /// Cartan matrix of one simple factor: `a[i][j] = <alpha_j, alpha_i^v>`,
    /// Bourbaki numbering.
    fn simple_cartan(fam: Family, r: usize) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match fam {
            Family::A => {
                for i in 0..r.saturating_sub(1) {
                    bond(i, i + 1, -1, -1);
                }
            }
            Family::B => {
                for i in 0..r - 1 {
                    bond(i, i + 1, -1, -1);
                }
                // last simple root is short: <alpha_{r-1}, alpha_r^v> = -2
                a[r - 1][r - 2] = -2;
            }
            Family::C => {
                for i in 0..r - 1 {
                    bond(i, i + 1, -1, -1);
                }
                // last simple root is long: <alpha_r, alpha_{r-1}^v> = -2
                a[r - 2][r - 1] = -2;
            }
            Family::D => {
                for i in 0..r - 2 {
                    bond(i, i + 1, -1, -1);
                }
                bond(r - 3, r - 1, -1, -1);
            }
            Family::E => {
                // chain 1-3-4-5-... with node 2 attached to node 4 (Bourbaki)
                let chain: Vec<usize> = std::iter::once(0).chain(2..r).collect();
                for w in chain.windows(2) {
                    bond(w[0], w[1], -1, -1);
                }
                bond(1, 3, -1, -1);
            }
            Family::F => {
                bond(0, 1, -1, -1);
                bond(1, 2, -1, -2);
                bond(2, 3, -1, -1);
            }
            Family::G => {
                // alpha_1 short, alpha_2 long
                bond(0, 1, -3, -1);
            }
        }
        a
    }

    /// Block-diagonal Cartan matrix of the product.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let rank = self.rank();
        let mut a = vec![vec![0i64; rank]; rank];
        let mut offset = 0;
        for &(fam, r) in &self.0 {
            let block = Self::simple_cartan(fam, r);
            for i in 0..r {
                for j in 0..r {
                    a[offset + i][offset + j] = block[i][j];
                }
            }
            offset += r;
        }
        a
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let fam = match chars.next() {
                Some('A') | Some('a') => Family::A,
                Some('B') | Some('b') => Family::B,
                Some('C') | Some('c') => Family::C,
                Some('D') | Some('d') => Family::D,
                Some('E') | Some('e') => Family::E,
                Some('F') | Some('f') => Family::F,
                Some('G') | Some('g') => Family::G,
                _ => {
                    return Err(Error::InvalidCartanType(format!(
                        "cannot parse factor '{part}'"
                    )))
                }
            };
            let rest = chars.as_str();
            if rest.is_empty() || rest.len() > 3 || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::InvalidCartanType(format!(
                    "cannot parse rank in factor '{part}'"
                )));
            }
            let rank: usize = rest.parse().unwrap();
            factors.push((fam, rank));
        }
        let t = CartanType(factors);
        t.validate()?;
        Ok(t)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(fam, r)| format!("{fam}{r}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A root carried in three coordinate systems at once: fundamental-weight
/// coordinates, simple-root coordinates (for the positivity test), and the
/// expansion of its coroot over the simple coroots (for pairings).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub wt: Vec<i64>,
    pub rt: Vec<i64>,
    pub cort: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.rt.iter().any(|&c| c > 0) && self.rt.iter().all(|&c| c >= 0)
    }

    /// Height: sum of the simple-root coordinates.
    pub fn height(&self) -> i64 {
        self.rt.iter().sum()
    }
}

/// Immutable Cartan datum shared by the whole engine.
#[derive(Debug)]
pub struct RootDatum {
    pub ctype: CartanType,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^v>`
    pub cartan: Vec<Vec<i64>>,
    pub simple_roots: Vec<Root>,
    /// All positive roots, sorted by (height, weight coordinates).
    pub positive_roots: Vec<Root>,
    /// rho = sum of fundamental weights, in weight coordinates.
    pub rho: Vec<i64>,
}

impl RootDatum {
    pub fn build(ctype: CartanType) -> Result<Arc<RootDatum>> {
        ctype.validate()?;
        let rank = ctype.rank();
        let cartan = ctype.cartan_matrix();
        let simple_roots: Vec<Root> = (0..rank)
            .map(|j| {
                let wt: Vec<i64> = (0..rank).map(|i| cartan[i][j]).collect();
                let mut rt = vec![0i64; rank];
                rt[j] = 1;
                let mut cort = vec![0i64; rank];
                cort[j] = 1;
                Root { wt, rt, cort }
            })
            .collect();

        // Closure of the simple roots under the simple reflections; keep the
        // positives.
        let mut positive_roots = closure_roots(&cartan, &simple_roots);
        positive_roots.retain(|r| r.is_positive());
        positive_roots.sort_by(|a, b| (a.height(), &a.rt).cmp(&(b.height(), &b.rt)));

        let expected = ctype.num_positive_roots();
        if positive_roots.len() != expected {
            return Err(Error::Internal(format!(
                "positive-root count {} does not match the classical count {expected} for {ctype}",
                positive_roots.len()
            )));
        }

        Ok(Arc::new(RootDatum {
            ctype,
            rank,
            cartan,
            simple_roots,
            positive_roots,
            rho: vec![1; rank],
        }))
    }

    /// dim G/B = number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// Reflect a weight (in weight coordinates) in the i-th simple root.
    pub fn reflect_weight(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let vi = v[i];
        v.iter()
            .enumerate()
            .map(|(j, &c)| c - vi * self.cartan[j][i])
            .collect()
    }

    /// Reflect a weight in an arbitrary root: `v - <v, alpha^v> alpha`.
    pub fn reflect_weight_by_root(&self, alpha: &Root, v: &[i64]) -> Vec<i64> {
        let p: i64 = alpha.cort.iter().zip(v).map(|(c, w)| c * w).sum();
        v.iter()
            .zip(&alpha.wt)
            .map(|(&c, &a)| c - p * a)
            .collect()
    }

    /// Apply the word `s_{w[0]} s_{w[1]} ...` to a weight (innermost first).
    pub fn act_word(&self, word: &[usize], v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for &i in word.iter().rev() {
            out = self.reflect_weight(i, &out);
        }
        out
    }

    /// Reflect a full root (all three coordinate systems) in the i-th simple
    /// root.
    pub fn reflect_root(&self, i: usize, r: &Root) -> Root {
        reflect_root_simple(&self.cartan, i, r)
    }

    /// Pairing `<lambda, alpha^v>` for a weight in weight coordinates.
    pub fn pairing_int(&self, lambda: &[i64], alpha: &Root) -> i64 {
        alpha.cort.iter().zip(lambda).map(|(c, w)| c * w).sum()
    }

    /// Pairing with rational weight coordinates.
    pub fn pairing(&self, lambda: &[Rational], alpha: &Root) -> Rational {
        let mut acc = Rational::from_integer(0.into());
        for (c, w) in alpha.cort.iter().zip(lambda) {
            acc += w * rat_int(*c);
        }
        acc
    }
}

fn reflect_root_simple(cartan: &[Vec<i64>], i: usize, r: &Root) -> Root {
    let rank = cartan.len();
    // weight coords: v - v_i * (column i of the Cartan matrix)
    let vi = r.wt[i];
    let wt: Vec<i64> = (0..rank).map(|j| r.wt[j] - vi * cartan[j][i]).collect();
    // root coords: only the i-th changes, by <alpha, alpha_i^v> = wt_i
    let mut rt = r.rt.clone();
    rt[i] -= vi;
    // coroot coords: only the i-th changes, by <alpha_i, alpha^v>
    let pair_back: i64 = (0..rank).map(|j| r.cort[j] * cartan[j][i]).sum();
    let mut cort = r.cort.clone();
    cort[i] -= pair_back;
    Root { wt, rt, cort }
}

fn closure_roots(cartan: &[Vec<i64>], simple: &[Root]) -> Vec<Root> {
    let mut seen: std::collections::BTreeMap<Vec<i64>, Root> = std::collections::BTreeMap::new();
    let mut queue: Vec<Root> = simple.to_vec();
    for r in simple {
        seen.insert(r.wt.clone(), r.clone());
    }
    while let Some(root) = queue.pop() {
        for i in 0..cartan.len() {
            let refl = reflect_root_simple(cartan, i, &root);
            if !seen.contains_key(&refl.wt) {
                seen.insert(refl.wt.clone(), refl.clone());
                queue.push(refl);
            }
        }
    }
    seen.into_values().collect()
}

/// A weight with rational coordinates in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub coords: Vec<Rational>,
}

impl Weight {
    pub fn from_int(coords: &[i64]) -> Self {
        Weight {
            coords: coords.iter().map(|&c| rat_int(c)).collect(),
        }
    }
}

pub fn render_int_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}
