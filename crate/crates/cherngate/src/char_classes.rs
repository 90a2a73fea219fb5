//! Universal conversions between Chern classes, the Chern character, and the
//! Todd class.
//!
//! The universal polynomials are generated once per (rank, degree cap) from
//! symmetric-function algebra over formal roots and cached; nothing is
//! transcribed from tables. Evaluation is generic over any commutative
//! graded carrier ring.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};


use crate::error::{Error, Result};
use crate::poly::{GradedPoly, Monomial, PolyContext};
use crate::rational::{inv_factorial, rat_int, todd_series_coeffs, Rational};

/// Minimal interface the evaluators need from a graded commutative ring.
pub trait ClassRing {
    type Elt: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elt;
    fn one(&self) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn scale(&self, c: &Rational, a: &Self::Elt) -> Self::Elt;
    /// Homogeneous part of the given (complex) degree.
    fn component(&self, a: &Self::Elt, degree: usize) -> Self::Elt;
    /// Largest degree the ring carries.
    fn top_degree(&self) -> usize;

    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.add(a, &self.scale(&rat_int(-1), b))
    }

    fn constant(&self, c: &Rational) -> Self::Elt {
        self.scale(c, &self.one())
    }

    fn is_zero(&self, a: &Self::Elt) -> bool {
        *a == self.zero()
    }
}

/// `GradedPoly` carrier over a fixed context; degree = total weight degree.
#[derive(Clone)]
pub struct BorelRing {
    pub ctx: Arc<PolyContext>,
}

impl ClassRing for BorelRing {
    type Elt = GradedPoly;

    fn zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.ctx)
    }

    fn one(&self) -> GradedPoly {
        GradedPoly::one(&self.ctx)
    }

    fn add(&self, a: &GradedPoly, b: &GradedPoly) -> GradedPoly {
        a.add(b)
    }

    fn mul(&self, a: &GradedPoly, b: &GradedPoly) -> GradedPoly {
        a.mul(b)
    }

    fn scale(&self, c: &Rational, a: &GradedPoly) -> GradedPoly {
        a.scale(c)
    }

    fn component(&self, a: &GradedPoly, degree: usize) -> GradedPoly {
        a.component(degree)
    }

    fn top_degree(&self) -> usize {
        self.ctx.cap
    }
}

/// A candidate tuple (c_1, ..., c_r) of classes in some carrier ring;
/// `classes[i]` has complex degree i+1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernTuple<E> {
    pub classes: Vec<E>,
}

impl<E> ChernTuple<E> {
    pub fn new(classes: Vec<E>) -> Self {
        ChernTuple { classes }
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }
}

/// Universal polynomials for a given rank, in variables `c1..cr` with weighted
/// degree `deg(ci) = i`. `ch[k]` is the degree-k piece of the Chern character
/// (without the rank constant); `todd[k]` the degree-k piece of the Todd
/// class.
pub struct UniversalPolys {
    pub rank: usize,
    pub cap: usize,
    pub ch: Vec<GradedPoly>,
    pub todd: Vec<GradedPoly>,
    /// The shared c-variable context.
    pub ctx: Arc<PolyContext>,
}

fn universal_cache() -> &'static Mutex<HashMap<(usize, usize), Arc<UniversalPolys>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<UniversalPolys>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fetch (or generate and cache) the universal polynomials.
pub fn universal(rank: usize, cap: usize) -> Arc<UniversalPolys> {
    if let Some(hit) = universal_cache().lock().unwrap().get(&(rank, cap)) {
        return hit.clone();
    }
    let generated = Arc::new(generate_universal(rank, cap));
    universal_cache()
        .lock()
        .unwrap()
        .entry((rank, cap))
        .or_insert(generated)
        .clone()
}

/// Express a symmetric homogeneous polynomial in the formal roots as a
/// polynomial in the elementary symmetric functions, by repeatedly stripping
/// the leading term. The output lives in the c-variable context.
fn decompose_symmetric(
    f: &GradedPoly,
    elems: &[GradedPoly],
    c_ctx: &Arc<PolyContext>,
) -> GradedPoly {
    let rank = elems.len();
    let mut rem = f.clone();
    let mut out = GradedPoly::zero(c_ctx);
    // `f` is homogeneous, so within the pinned term order the first stored
    // entry is the lex-largest monomial, whose exponents are weakly
    // decreasing for a symmetric polynomial.
    while let Some((m, coef)) = rem.terms.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
        // leading exponents are weakly decreasing for a symmetric polynomial
        let a = &m.0;
        debug_assert!(a.windows(2).all(|w| w[0] >= w[1]), "not symmetric");
        let mut c_exps = vec![0u16; rank];
        let mut basis_prod = GradedPoly::one(&f.ctx);
        for i in 0..rank {
            let next = if i + 1 < rank { a[i + 1] } else { 0 };
            let e = a[i] - next;
            c_exps[i] = e;
            for _ in 0..e {
                basis_prod = basis_prod.mul(&elems[i]);
            }
        }
        rem = rem.sub(&basis_prod.scale(&coef));
        let mut term = GradedPoly::zero(c_ctx);
        term.terms.insert(Monomial(c_exps), coef);
        out = out.add(&term);
    }
    out
}

fn generate_universal(rank: usize, cap: usize) -> UniversalPolys {
    let y_ctx = PolyContext::new((1..=rank).map(|i| format!("y{i}")).collect(), cap);
    let c_ctx = PolyContext::new((1..=rank).map(|i| format!("c{i}")).collect(), cap);
    // elementary symmetric functions of the formal roots
    let mut elems = Vec::with_capacity(rank);
    let mut total = GradedPoly::one(&y_ctx);
    for i in 0..rank {
        let factor = GradedPoly::one(&y_ctx).add(&GradedPoly::var(&y_ctx, i));
        total = total.mul(&factor);
        let _ = i;
    }
    for k in 1..=rank {
        elems.push(total.component(k));
    }

    // power sums -> Chern character pieces p_k/k!
    let mut ch = Vec::with_capacity(cap + 1);
    ch.push(GradedPoly::zero(&c_ctx)); // degree 0 handled by the rank constant
    for k in 1..=cap {
        let mut p_k = GradedPoly::zero(&y_ctx);
        for i in 0..rank {
            p_k = p_k.add(&GradedPoly::var(&y_ctx, i).pow(k));
        }
        let piece = p_k.scale(&inv_factorial(k));
        ch.push(decompose_symmetric(&piece, &elems, &c_ctx));
    }

    // Todd class: product of the Todd series over the roots
    let coeffs = todd_series_coeffs(cap);
    let mut td_total = GradedPoly::one(&y_ctx);
    for i in 0..rank {
        let y = GradedPoly::var(&y_ctx, i);
        let mut factor = GradedPoly::zero(&y_ctx);
        let mut pow = GradedPoly::one(&y_ctx);
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                pow = pow.mul(&y);
                if pow.is_zero() {
                    break;
                }
            }
            factor = factor.add(&pow.scale(c));
        }
        td_total = td_total.mul(&factor);
    }
    let mut todd = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        todd.push(decompose_symmetric(&td_total.component(k), &elems, &c_ctx));
    }

    UniversalPolys {
        rank,
        cap,
        ch,
        todd,
        ctx: c_ctx,
    }
}

/// Evaluate a universal polynomial (in c-variables) at concrete classes.
fn eval_universal<R: ClassRing>(ring: &R, poly: &GradedPoly, classes: &[R::Elt]) -> R::Elt {
    let mut acc = ring.zero();
    let mut pows: Vec<Vec<R::Elt>> = classes
        .iter()
        .map(|c| vec![ring.one(), c.clone()])
        .collect();
    for (m, coef) in &poly.terms {
        let mut term = ring.constant(coef);
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while pows[i].len() <= e as usize {
                let next = ring.mul(pows[i].last().unwrap(), &classes[i]);
                pows[i].push(next);
            }
            term = ring.mul(&term, &pows[i][e as usize]);
        }
        acc = ring.add(&acc, &term);
    }
    acc
}

fn validate_tuple_degrees<R: ClassRing>(ring: &R, t: &ChernTuple<R::Elt>) -> Result<()> {
    for (i, c) in t.classes.iter().enumerate() {
        let d = i + 1;
        if d <= ring.top_degree() && ring.component(c, d) != *c {
            return Err(Error::Mismatch(format!(
                "class c{} is not homogeneous of degree {}",
                i + 1,
                d
            )));
        }
    }
    Ok(())
}

/// Chern character `rank + sum_k P_k(c_1..c_k)`, truncated at `cap`.
pub fn chern_character<R: ClassRing>(
    ring: &R,
    t: &ChernTuple<R::Elt>,
    cap: usize,
) -> Result<R::Elt> {
    validate_tuple_degrees(ring, t)?;
    let uni = universal(t.rank(), cap);
    let mut acc = ring.constant(&rat_int(t.rank() as i64));
    for k in 1..=cap {
        acc = ring.add(&acc, &eval_universal(ring, &uni.ch[k], &t.classes));
    }
    Ok(acc)
}

/// Todd class of the tuple, truncated at `cap`.
pub fn todd_class<R: ClassRing>(ring: &R, t: &ChernTuple<R::Elt>, cap: usize) -> Result<R::Elt> {
    validate_tuple_degrees(ring, t)?;
    let uni = universal(t.rank(), cap);
    let mut acc = ring.zero();
    for k in 0..=cap {
        acc = ring.add(&acc, &eval_universal(ring, &uni.todd[k], &t.classes));
    }
    Ok(acc)
}

/// Chern tuple of a direct sum of line bundles with the given first Chern
/// classes: the elementary symmetric functions of the inputs.
pub fn sum_of_line_bundles<R: ClassRing>(ring: &R, weights: &[R::Elt]) -> ChernTuple<R::Elt> {
    let rank = weights.len();
    let mut total = ring.one();
    for w in weights {
        let factor = ring.add(&ring.one(), w);
        total = ring.mul(&total, &factor);
    }
    let classes = (1..=rank)
        .map(|k| {
            if k <= ring.top_degree() {
                ring.component(&total, k)
            } else {
                ring.zero()
            }
        })
        .collect();
    ChernTuple::new(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ring(rank: usize, cap: usize) -> BorelRing {
        BorelRing {
            ctx: PolyContext::new((1..=rank).map(|i| format!("a{i}")).collect(), cap),
        }
    }

    #[test]
    fn line_bundle_character_is_exponential() {
        // rank 1: ch(c1) = e^{c1}
        let r = ring(1, 5);
        let a = GradedPoly::var(&r.ctx, 0);
        let t = ChernTuple::new(vec![a.clone()]);
        let ch = chern_character(&r, &t, 5).unwrap();
        assert_eq!(ch, a.trunc_exp().unwrap());
    }

    #[test]
    fn ch4_matches_displayed_coefficients() {
        // P_4 = (c1^4 - 4 c1^2 c2 + 4 c1 c3 + 2 c2^2 - 4 c4)/24
        let uni = universal(4, 4);
        let expect = GradedPoly::parse(
            &uni.ctx,
            "1/24 c1^4 - 4/24 c1^2*c2 + 4/24 c1*c3 + 2/24 c2^2 - 4/24 c4",
        )
        .unwrap();
        assert_eq!(uni.ch[4], expect);
    }

    #[test]
    fn low_todd_pieces() {
        let uni = universal(4, 4);
        assert_eq!(
            uni.todd[1],
            GradedPoly::parse(&uni.ctx, "1/2 c1").unwrap()
        );
        assert_eq!(
            uni.todd[2],
            GradedPoly::parse(&uni.ctx, "1/12 c1^2 + 1/12 c2").unwrap()
        );
        assert_eq!(
            uni.todd[3],
            GradedPoly::parse(&uni.ctx, "1/24 c1*c2").unwrap()
        );
        // 4 td_4 = -(1/180)(t1^4 - 4 t1^2 t2 - 3 t2^2 - t1 t3 + t4)
        let four_td4 = uni.todd[4].scale(&rat_int(4));
        let expect = GradedPoly::parse(
            &uni.ctx,
            "-1/180 c1^4 + 4/180 c1^2*c2 + 3/180 c2^2 + 1/180 c1*c3 - 1/180 c4",
        )
        .unwrap();
        assert_eq!(four_td4, expect);
    }

    #[test]
    fn additivity_under_direct_sum() {
        // ch(t (+) t') = ch(t) + ch(t'), with (+) implemented by multiplying
        // total Chern classes; brute-force via formal roots of small rank.
        let r = ring(4, 4);
        let a1 = GradedPoly::var(&r.ctx, 0);
        let a2 = GradedPoly::var(&r.ctx, 1);
        let b1 = GradedPoly::var(&r.ctx, 2);
        let b2 = GradedPoly::var(&r.ctx, 3);
        let t1 = sum_of_line_bundles(&r, &[a1.clone(), a2.clone()]);
        let t2 = sum_of_line_bundles(&r, &[b1.clone(), b2.clone()]);
        let sum = sum_of_line_bundles(&r, &[a1, a2, b1, b2]);
        let lhs = chern_character(&r, &sum, 4).unwrap();
        let rhs = chern_character(&r, &t1, 4)
            .unwrap()
            .add(&chern_character(&r, &t2, 4).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn todd_multiplicative_under_direct_sum() {
        let r = ring(4, 4);
        let a1 = GradedPoly::var(&r.ctx, 0);
        let a2 = GradedPoly::var(&r.ctx, 1);
        let b1 = GradedPoly::var(&r.ctx, 2);
        let t1 = sum_of_line_bundles(&r, &[a1.clone(), a2.clone()]);
        let t2 = sum_of_line_bundles(&r, &[b1.clone()]);
        let sum = sum_of_line_bundles(&r, &[a1, a2, b1]);
        let lhs = todd_class(&r, &sum, 4).unwrap();
        let rhs = todd_class(&r, &t1, 4)
            .unwrap()
            .mul(&todd_class(&r, &t2, 4).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn chern_character_over_formal_roots_is_sum_of_exponentials() {
        // For a sum of line bundles the character is the sum of e^{w_i}.
        let r = ring(3, 6);
        let ws: Vec<GradedPoly> = (0..3).map(|i| GradedPoly::var(&r.ctx, i)).collect();
        let t = sum_of_line_bundles(&r, &ws);
        let ch = chern_character(&r, &t, 6).unwrap();
        let mut expect = GradedPoly::zero(&r.ctx);
        for w in &ws {
            expect = expect.add(&w.trunc_exp().unwrap());
        }
        assert_eq!(ch, expect);
    }

    #[test]
    fn newton_round_trip() {
        // Reconstruct the tuple from the character: the degree-k component of
        // ch determines p_k = k! ch_k, and Newton's identities then recover
        // e_k. Random tuples of rank <= 5.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for rank in 1..=5usize {
            let r = ring(rank, rank);
            for _ in 0..4 {
                // random tuple: c_i = random rational multiple of a power of
                // the sum of variables (degree i)
                let sum_vars = (0..rank)
                    .fold(GradedPoly::zero(&r.ctx), |acc, i| {
                        acc.add(&GradedPoly::var(&r.ctx, i))
                    });
                let classes: Vec<GradedPoly> = (1..=rank)
                    .map(|i| sum_vars.pow(i).scale(&rat_int(rng.gen_range(-3..=3))))
                    .collect();
                let t = ChernTuple::new(classes.clone());
                let ch = chern_character(&r, &t, rank).unwrap();
                // recover p_k, then e_k by Newton's identities
                let mut p: Vec<GradedPoly> = vec![GradedPoly::zero(&r.ctx)];
                for k in 1..=rank {
                    let mut fact = rat_int(1);
                    for j in 2..=k {
                        fact *= rat_int(j as i64);
                    }
                    p.push(ch.component(k).scale(&fact));
                }
                let mut e: Vec<GradedPoly> = vec![GradedPoly::one(&r.ctx)];
                for k in 1..=rank {
                    // k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
                    let mut acc = GradedPoly::zero(&r.ctx);
                    for i in 1..=k {
                        let term = e[k - i].mul(&p[i]);
                        acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
                    }
                    e.push(acc.scale(&rat(1, k as i64)));
                }
                for k in 1..=rank {
                    assert_eq!(e[k], classes[k - 1], "rank {rank}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn p2_weights_example() {
        // weights (h, 2h) on a rank-2 carrier: c1 = 3h, c2 = 2h^2
        let r = ring(1, 2);
        let h = GradedPoly::var(&r.ctx, 0);
        let t = sum_of_line_bundles(&r, &[h.clone(), h.scale(&rat_int(2))]);
        assert_eq!(t.classes[0], h.scale(&rat_int(3)));
        assert_eq!(t.classes[1], h.pow(2).scale(&rat_int(2)));
        // all-zero weights give the zero tuple
        let z = sum_of_line_bundles(&r, &[r.zero(), r.zero()]);
        assert!(z.classes.iter().all(|c| c.is_zero()));
        // a single weight gives the weight itself
        let s = sum_of_line_bundles(&r, &[h.clone()]);
        assert_eq!(s.classes, vec![h]);
    }

    #[test]
    fn rejects_inhomogeneous_classes() {
        let r = ring(2, 3);
        let bad = GradedPoly::one(&r.ctx).add(&GradedPoly::var(&r.ctx, 0));
        let t = ChernTuple::new(vec![bad, r.zero()]);
        assert!(chern_character(&r, &t, 3).is_err());
    }
}
