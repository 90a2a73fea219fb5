//! Weyl group elements, reduced words, Bruhat order, parabolic cosets.
//!
//! Elements are identified by their action on rho (a regular weight), so
//! equality and hashing cost O(rank); the stored reduced word is the
//! canonical one produced by greedy descent on the key, choosing the
//! smallest descent index at every step.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::root_system::{Root, RootDatum};

/// Default enumeration guard: |W| must not exceed 10!.
pub const DEFAULT_GROUP_LIMIT: u64 = 3_628_800;

#[derive(Debug, Clone)]
pub struct WeylElement {
    /// Canonical reduced word (smallest descent first).
    pub word: Vec<usize>,
    /// Image of rho under the element; determines the element uniquely.
    pub key: Vec<i64>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), &self.word).cmp(&(other.len(), &other.word))
    }
}

impl WeylElement {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn render(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word
                .iter()
                .map(|i| format!("s{}", i + 1))
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Parse either `s1*s2*s1` or a bare digit string like `121`
    /// (digit form only for rank <= 9).
    pub fn parse_word(datum: &RootDatum, s: &str) -> Result<Vec<usize>> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        if s.contains('s') {
            for part in s.split('*') {
                let part = part.trim();
                let idx: usize = part
                    .strip_prefix('s')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad reflection '{part}'")))?;
                if idx == 0 || idx > datum.rank {
                    return Err(Error::Parse(format!("reflection index {idx} out of range")));
                }
                word.push(idx - 1);
            }
        } else {
            for ch in s.chars() {
                let idx = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad word character '{ch}'")))?
                    as usize;
                if idx == 0 || idx > datum.rank {
                    return Err(Error::Parse(format!("reflection index {idx} out of range")));
                }
                word.push(idx - 1);
            }
        }
        Ok(word)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

pub fn identity(datum: &RootDatum) -> WeylElement {
    WeylElement {
        word: Vec::new(),
        key: datum.rho.clone(),
    }
}

pub fn simple(datum: &RootDatum, i: usize) -> WeylElement {
    from_key(datum, datum.reflect_weight(i, &datum.rho))
}

/// Reconstruct the canonical element from its key by greedy descent: while
/// some coordinate is negative, strip the smallest such reflection.
pub fn from_key(datum: &RootDatum, key: Vec<i64>) -> WeylElement {
    let mut word = Vec::new();
    let mut cur = key.clone();
    loop {
        match cur.iter().position(|&c| c < 0) {
            Some(i) => {
                word.push(i);
                cur = datum.reflect_weight(i, &cur);
            }
            None => break,
        }
    }
    debug_assert_eq!(cur, datum.rho, "key is not in the orbit of rho");
    WeylElement { word, key }
}

/// Element given by an arbitrary word (not necessarily reduced); the stored
/// word is re-reduced canonically.
pub fn from_word(datum: &RootDatum, word: &[usize]) -> WeylElement {
    from_key(datum, datum.act_word(word, &datum.rho))
}

pub fn multiply(datum: &RootDatum, u: &WeylElement, v: &WeylElement) -> WeylElement {
    from_key(datum, datum.act_word(&u.word, &v.key))
}

pub fn inverse(datum: &RootDatum, u: &WeylElement) -> WeylElement {
    let rev: Vec<usize> = u.word.iter().rev().copied().collect();
    from_word(datum, &rev)
}

/// Apply the element to a weight in integer coordinates.
pub fn act(datum: &RootDatum, u: &WeylElement, v: &[i64]) -> Vec<i64> {
    datum.act_word(&u.word, v)
}

/// The reflection associated to an arbitrary root.
pub fn reflection(datum: &RootDatum, alpha: &Root) -> WeylElement {
    from_key(datum, datum.reflect_weight_by_root(alpha, &datum.rho))
}

/// Longest element: the unique element sending rho to -rho.
pub fn longest(datum: &RootDatum) -> WeylElement {
    let key: Vec<i64> = datum.rho.iter().map(|&c| -c).collect();
    let w0 = from_key(datum, key);
    debug_assert_eq!(w0.len(), datum.num_positive());
    w0
}

/// Enumerate the whole group, sorted by (length, word). Errors when the
/// group order exceeds `limit`.
pub fn enumerate(datum: &RootDatum, limit: u64) -> Result<Vec<WeylElement>> {
    let order = datum.ctype.weyl_order();
    if order > BigUint::from(limit) {
        return Err(Error::ResourceLimit(format!(
            "|W| = {order} exceeds the configured limit {limit}"
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![identity(datum)];
    seen.insert(identity(datum).key);
    while let Some(w) = frontier.pop() {
        for i in 0..datum.rank {
            let key = {
                // right multiplication: (w s_i)(rho) = w(s_i rho)
                let si_rho = datum.reflect_weight(i, &datum.rho);
                datum.act_word(&w.word, &si_rho)
            };
            if seen.insert(key.clone()) {
                frontier.push(from_key(datum, key));
            }
        }
        out.push(w);
    }
    out.sort();
    Ok(out)
}

/// Bruhat order via the lifting property, walking the stored reduced word of
/// the larger element.
pub fn bruhat_leq(datum: &RootDatum, u: &WeylElement, w: &WeylElement) -> bool {
    fn rec(datum: &RootDatum, u_key: &[i64], u_len: usize, w_word: &[usize]) -> bool {
        if u_len == 0 {
            return true;
        }
        if u_len > w_word.len() {
            return false;
        }
        let i = w_word[0];
        if u_key[i] < 0 {
            let u2 = datum.reflect_weight(i, u_key);
            rec(datum, &u2, u_len - 1, &w_word[1..])
        } else {
            rec(datum, u_key, u_len, &w_word[1..])
        }
    }
    rec(datum, &u.key, u.len(), &w.word)
}

/// Every reduced word of `w`, in lexicographic order.
pub fn all_reduced_words(
    datum: &RootDatum,
    w: &WeylElement,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(
        datum: &RootDatum,
        key: &[i64],
        len: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<()> {
        if len == 0 {
            if out.len() >= limit {
                return Err(Error::ResourceLimit(format!(
                    "more than {limit} reduced words"
                )));
            }
            out.push(prefix.clone());
            return Ok(());
        }
        for i in 0..datum.rank {
            if key[i] < 0 {
                let next = datum.reflect_weight(i, key);
                prefix.push(i);
                rec(datum, &next, len - 1, prefix, out, limit)?;
                prefix.pop();
            }
        }
        Ok(())
    }
    rec(datum, &w.key, w.len(), &mut prefix, &mut out, limit)?;
    Ok(out)
}

/// Longest element of the parabolic subgroup generated by `subset`.
pub fn parabolic_longest(datum: &RootDatum, subset: &[usize]) -> WeylElement {
    let mut v = identity(datum);
    loop {
        let mut advanced = false;
        for &i in subset {
            let vi = multiply(datum, &v, &simple(datum, i));
            if vi.len() > v.len() {
                v = vi;
                advanced = true;
            }
        }
        if !advanced {
            return v;
        }
    }
}

/// Minimal-length representative of the coset `w W_I`.
pub fn coset_min_rep(datum: &RootDatum, w: &WeylElement, subset: &[usize]) -> WeylElement {
    let mut v = w.clone();
    loop {
        let mut advanced = false;
        for &i in subset {
            let vi = multiply(datum, &v, &simple(datum, i));
            if vi.len() < v.len() {
                v = vi;
                advanced = true;
            }
        }
        if !advanced {
            return v;
        }
    }
}

/// Maximal-length ("P-saturated") representative of the coset `w W_I`.
pub fn saturated_rep(datum: &RootDatum, w: &WeylElement, subset: &[usize]) -> WeylElement {
    let min = coset_min_rep(datum, w, subset);
    let w0i = parabolic_longest(datum, subset);
    let sat = multiply(datum, &min, &w0i);
    debug_assert_eq!(sat.len(), min.len() + w0i.len());
    sat
}

/// A reduced word `beta_1 ... beta_n` of the longest element whose initial
/// segment induces the given element: with `w_[1..k] = s_{beta_k} ... s_{beta_1}`
/// and `k = l(prefix)`, one has `w_[1..k] = prefix`.
pub fn extend_to_w0(datum: &RootDatum, prefix: &WeylElement) -> Vec<usize> {
    let w0 = longest(datum);
    let inv = inverse(datum, prefix);
    let mut word: Vec<usize> = inv.word.clone();
    let tail = multiply(datum, prefix, &w0);
    word.extend_from_slice(&tail.word);
    debug_assert_eq!(word.len(), datum.num_positive());
    debug_assert_eq!(from_word(datum, &word), w0);
    word
}

/// `w_[1..k] = s_{beta_k} ... s_{beta_1}` computed from a word.
pub fn segment_element(datum: &RootDatum, beta: &[usize], k: usize) -> WeylElement {
    let rev: Vec<usize> = beta[..k].iter().rev().copied().collect();
    from_word(datum, &rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn datum(t: &str) -> Arc<RootDatum> {
        RootDatum::build(t.parse().unwrap()).unwrap()
    }

    /// Oracle: number of inversions = |{alpha in Phi+ : w(alpha) < 0}|.
    fn inversion_count(d: &RootDatum, w: &WeylElement) -> usize {
        d.positive_roots
            .iter()
            .filter(|r| {
                let img = act(d, w, &r.wt);
                // convert to root coords via the reflection chain on Root
                let mut root = (*r).clone();
                for &i in w.word.iter().rev() {
                    root = d.reflect_root(i, &root);
                }
                assert_eq!(root.wt, img);
                !root.is_positive()
            })
            .count()
    }

    #[test]
    fn multiply_and_reduce() {
        let d = datum("A2");
        let e = identity(&d);
        let s1 = simple(&d, 0);
        assert_eq!(multiply(&d, &s1, &e), s1);
        assert!(multiply(&d, &s1, &s1).is_identity());
        let w = from_word(&d, &[0, 1, 0]);
        assert_eq!(w.len(), 3);
        assert_eq!(inversion_count(&d, &w), 3);
    }

    #[test]
    fn enumerate_orders() {
        for (t, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("A3", 24)] {
            let d = datum(t);
            let all = enumerate(&d, DEFAULT_GROUP_LIMIT).unwrap();
            assert_eq!(all.len(), n, "{t}");
            // key map is injective over the enumeration
            let keys: std::collections::BTreeSet<_> =
                all.iter().map(|w| w.key.clone()).collect();
            assert_eq!(keys.len(), n);
            // stored lengths match the inversion-count oracle
            for w in &all {
                assert_eq!(w.len(), inversion_count(&d, w), "{t}: {w}");
            }
        }
    }

    #[test]
    fn enumerate_limit() {
        let d = datum("A4");
        assert!(matches!(
            enumerate(&d, 100),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn longest_element() {
        for (t, l) in [("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6)] {
            let d = datum(t);
            let w0 = longest(&d);
            assert_eq!(w0.len(), l, "{t}");
            let neg_rho: Vec<i64> = d.rho.iter().map(|c| -c).collect();
            assert_eq!(act(&d, &w0, &d.rho), neg_rho);
            assert!(multiply(&d, &w0, &w0).is_identity());
        }
    }

    /// Oracle: subword property by exhaustive subsequence search.
    fn bruhat_oracle(d: &RootDatum, u: &WeylElement, w: &WeylElement) -> bool {
        let n = w.word.len();
        let k = u.word.len();
        if k > n {
            return false;
        }
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let sub: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| w.word[b]).collect();
            if &from_word(d, &sub) == u {
                return true;
            }
        }
        false
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for t in ["A2", "B2", "A3"] {
            let d = datum(t);
            let all = enumerate(&d, DEFAULT_GROUP_LIMIT).unwrap();
            for u in &all {
                for w in &all {
                    assert_eq!(
                        bruhat_leq(&d, u, w),
                        bruhat_oracle(&d, u, w),
                        "{t}: {u} vs {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let d = datum("A2");
        let all = enumerate(&d, 100).unwrap();
        let e = identity(&d);
        for w in &all {
            assert!(bruhat_leq(&d, &e, w));
            assert!(bruhat_leq(&d, w, w));
        }
        let s1 = simple(&d, 0);
        let s2 = simple(&d, 1);
        let s12 = multiply(&d, &s1, &s2);
        let s21 = multiply(&d, &s2, &s1);
        assert!(bruhat_leq(&d, &s1, &s12));
        assert!(bruhat_leq(&d, &s2, &s12));
        assert!(!bruhat_leq(&d, &s12, &s21));
        assert!(!bruhat_leq(&d, &s21, &s12));
    }

    #[test]
    fn reduced_words() {
        let d = datum("A2");
        let e = identity(&d);
        assert_eq!(all_reduced_words(&d, &e, 10).unwrap(), vec![Vec::<usize>::new()]);
        let s1 = simple(&d, 0);
        assert_eq!(all_reduced_words(&d, &s1, 10).unwrap(), vec![vec![0]]);
        let w0 = longest(&d);
        let words = all_reduced_words(&d, &w0, 10).unwrap();
        assert_eq!(words, vec![vec![0, 1, 0], vec![1, 0, 1]]);
        let db2 = datum("B2");
        let words = all_reduced_words(&db2, &longest(&db2), 10).unwrap();
        assert_eq!(words, vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0]]);
    }

    #[test]
    fn length_parity_and_subadditivity() {
        for t in ["A2", "B2"] {
            let d = datum(t);
            let all = enumerate(&d, 100).unwrap();
            for u in &all {
                for v in &all {
                    let uv = multiply(&d, u, v);
                    assert!(uv.len() <= u.len() + v.len());
                    assert_eq!((u.len() + v.len()) % 2, uv.len() % 2);
                }
            }
        }
    }

    #[test]
    fn parabolic_and_saturation() {
        let d = datum("A2");
        let e = identity(&d);
        // I = {} keeps the representative
        let s1 = simple(&d, 0);
        assert_eq!(saturated_rep(&d, &s1, &[]), s1);
        // I = all of Delta gives w0
        assert_eq!(saturated_rep(&d, &e, &[0, 1]), longest(&d));
        // A2, I = {1}, coset of e: saturated representative is s1
        assert_eq!(saturated_rep(&d, &e, &[0]), s1);
        // oracle: enumerate the coset and take max length
        let all = enumerate(&d, 100).unwrap();
        for w in &all {
            for subset in [vec![0], vec![1], vec![0, 1], vec![]] {
                let sat = saturated_rep(&d, w, &subset);
                let coset: Vec<&WeylElement> = all
                    .iter()
                    .filter(|u| {
                        coset_min_rep(&d, u, &subset) == coset_min_rep(&d, w, &subset)
                    })
                    .collect();
                let max = coset.iter().max_by_key(|u| u.len()).unwrap();
                assert_eq!(&&sat, max);
            }
        }
    }

    #[test]
    fn extend_prefix_examples() {
        let d = datum("A2");
        let w0 = longest(&d);
        // prefix e: any reduced word of w0, with empty induced segment
        let word = extend_to_w0(&d, &identity(&d));
        assert_eq!(from_word(&d, &word), w0);
        assert!(segment_element(&d, &word, 0).is_identity());
        // prefix w0: the whole word induces w0
        let word = extend_to_w0(&d, &w0);
        assert_eq!(segment_element(&d, &word, 3), w0);
        // prefix s1: verified by recomputing the segment from the word
        let s1 = simple(&d, 0);
        let word = extend_to_w0(&d, &s1);
        assert_eq!(segment_element(&d, &word, 1), s1);
        assert_eq!(from_word(&d, &word), w0);
        // all prefixes in B2
        let db2 = datum("B2");
        for u in enumerate(&db2, 100).unwrap() {
            let word = extend_to_w0(&db2, &u);
            assert_eq!(from_word(&db2, &word), longest(&db2));
            assert_eq!(segment_element(&db2, &word, u.len()), u);
        }
    }

    #[test]
    fn word_parsing() {
        let d = datum("A2");
        assert_eq!(WeylElement::parse_word(&d, "s1*s2*s1").unwrap(), vec![0, 1, 0]);
        assert_eq!(WeylElement::parse_word(&d, "121").unwrap(), vec![0, 1, 0]);
        assert_eq!(WeylElement::parse_word(&d, "e").unwrap(), Vec::<usize>::new());
        assert!(WeylElement::parse_word(&d, "s3").is_err());
        assert!(WeylElement::parse_word(&d, "130").is_err());
    }
}
