//! Divided-difference operators on the Borel picture of H*(G/B, Q).
//!
//! Classes are carried as polynomial representatives in the fundamental
//! weight coordinates x1..xr, truncated at total degree |Phi+|; they are
//! never reduced modulo the invariant ideal. Every number extracted factors
//! through the functionals D_w, which kill that ideal.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{GradedPoly, PolyContext};
use crate::rational::{rat_int, Rational};
use crate::root_system::RootDatum;
use crate::weyl::{self, WeylElement};

/// Shared context for polynomial representatives of classes on G/B.
#[derive(Debug, Clone)]
pub struct BorelCtx {
    pub datum: Arc<RootDatum>,
    pub poly: Arc<PolyContext>,
}

impl BorelCtx {
    pub fn new(datum: Arc<RootDatum>) -> Self {
        let cap = datum.num_positive();
        let poly = PolyContext::weight_vars(datum.rank, cap);
        BorelCtx { datum, poly }
    }

    pub fn zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.poly)
    }

    pub fn one(&self) -> GradedPoly {
        GradedPoly::one(&self.poly)
    }

    /// The linear representative of a weight given in integer coordinates.
    pub fn weight_poly(&self, coords: &[i64]) -> GradedPoly {
        GradedPoly::linear_int(&self.poly, coords)
    }

    /// Polynomial of the i-th simple root.
    pub fn simple_root_poly(&self, i: usize) -> GradedPoly {
        self.weight_poly(&self.datum.simple_roots[i].wt)
    }

    /// `e^{lambda}` truncated at the context cap.
    pub fn exp_weight(&self, coords: &[i64]) -> GradedPoly {
        self.weight_poly(coords).trunc_exp().expect("linear form")
    }

    /// Action of a group element: substitute `x_i -> w(omega_i)`.
    pub fn weyl_act(&self, w: &WeylElement, f: &GradedPoly) -> GradedPoly {
        self.weyl_act_word(&w.word, f)
    }

    pub fn weyl_act_word(&self, word: &[usize], f: &GradedPoly) -> GradedPoly {
        let rank = self.datum.rank;
        let images: Vec<GradedPoly> = (0..rank)
            .map(|i| {
                let mut omega = vec![0i64; rank];
                omega[i] = 1;
                self.weight_poly(&self.datum.act_word(word, &omega))
            })
            .collect();
        f.substitute(&images)
    }

    /// Divided difference for the i-th simple root:
    /// `A_i f = (f - s_i f)/alpha_i`. The division is exact; failure
    /// signals a reflection bug and is reported as a hard error.
    pub fn demazure(&self, i: usize, f: &GradedPoly) -> Result<GradedPoly> {
        let si_f = self.weyl_act_word(&[i], f);
        let num = f.sub(&si_f);
        if num.is_zero() {
            return Ok(self.zero());
        }
        num.divide_exact(&self.simple_root_poly(i))
            .map_err(|e| Error::Internal(format!("demazure division failed: {e}")))
    }

    /// `A_w`, composed right-to-left along a reduced word of `w`.
    pub fn demazure_w(&self, w: &WeylElement, f: &GradedPoly) -> Result<GradedPoly> {
        self.demazure_word(&w.word, f)
    }

    pub fn demazure_word(&self, word: &[usize], f: &GradedPoly) -> Result<GradedPoly> {
        let mut acc = f.clone();
        for &i in word.iter().rev() {
            if acc.is_zero() {
                return Ok(acc);
            }
            acc = self.demazure(i, &acc)?;
        }
        Ok(acc)
    }

    /// `D_w f = (A_w f)(0)`. Only the homogeneous part of degree l(w)
    /// contributes, so that component is extracted first.
    pub fn d_w(&self, w: &WeylElement, f: &GradedPoly) -> Rational {
        let part = f.component(w.len());
        if part.is_zero() {
            return Rational::zero();
        }
        let res = self
            .demazure_w(w, &part)
            .expect("divided differences are exact on polynomial representatives");
        res.constant_term()
    }

    /// Integration over G/B: `D_{w0}`.
    pub fn integrate(&self, f: &GradedPoly) -> Rational {
        let w0 = weyl::longest(&self.datum);
        self.d_w(&w0, f)
    }

    /// Pairing of a class against the Schubert class indexed by `w`.
    pub fn schubert_pair(&self, f: &GradedPoly, w: &WeylElement) -> Rational {
        self.d_w(w, f)
    }

    /// Weyl dimension formula: `prod_{alpha>0} <chi+rho, alpha^v>/<rho, alpha^v>`
    /// for a dominant weight `chi`. Used as the independent oracle for the
    /// Euler characteristic of line bundles.
    pub fn weyl_dim(&self, chi: &[i64]) -> Rational {
        let mut num = rat_int(1);
        let mut den = rat_int(1);
        let chi_rho: Vec<i64> = chi.iter().zip(&self.datum.rho).map(|(a, b)| a + b).collect();
        for alpha in &self.datum.positive_roots {
            num *= rat_int(self.datum.pairing_int(&chi_rho, alpha));
            den *= rat_int(self.datum.pairing_int(&self.datum.rho, alpha));
        }
        num / den
    }
}
