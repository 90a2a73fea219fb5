//! Finite presentations of the even cohomology of a compact complex
//! manifold, with integration, tangent Chern data and an optional Sq2 table;
//! plus the built-in instances (projective spaces, Kunneth products) and the
//! text format for user-supplied models.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::char_classes::{ChernTuple, ClassRing};
use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};
use crate::root_system::{CartanType, RootDatum};
use crate::weyl;

/// Element of a `RingModel`: dense coefficient vector over the model basis.
pub type ModelElt = Vec<Rational>;

/// A basis element with its complex degree.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElt {
    pub name: String,
    pub degree: usize,
}

/// Finite presentation of `H^even(X, Z)`: a basis per degree, structure
/// constants, an integration functional on the top degree, the Chern classes
/// of the tangent bundle, distinguished degree-1 generators, and an optional
/// table for the squaring operation on H^4 mod 2.
#[derive(Debug, Clone)]
pub struct RingModel {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<BasisElt>,
    /// `mult[i][j]` = expansion of `b_i * b_j` over the basis.
    pub mult: Vec<Vec<Vec<(usize, Rational)>>>,
    /// Value of the integration functional on each top-degree basis element.
    pub integrate_row: Vec<Rational>,
    /// `tangent[i]` = c_{i+1}(T_X).
    pub tangent: Vec<ModelElt>,
    /// Indices of the distinguished degree-1 basis elements.
    pub h2_basis: Vec<usize>,
    /// Mod-2 matrix of Sq2 from the degree-2 basis to the degree-3 basis.
    pub sq2: Option<Vec<Vec<u8>>>,
}

impl RingModel {
    pub fn zero_elt(&self) -> ModelElt {
        vec![Rational::zero(); self.basis.len()]
    }

    pub fn basis_elt(&self, i: usize) -> ModelElt {
        let mut v = self.zero_elt();
        v[i] = rat_int(1);
        v
    }

    pub fn unit(&self) -> ModelElt {
        self.basis_elt(0)
    }

    pub fn indices_of_degree(&self, d: usize) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == d)
            .collect()
    }

    pub fn find_basis(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn mul_elt(&self, a: &ModelElt, b: &ModelElt) -> ModelElt {
        let mut out = self.zero_elt();
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for (k, c) in &self.mult[i][j] {
                    out[*k] += ca * cb * c;
                }
            }
        }
        out
    }

    pub fn add_elt(&self, a: &ModelElt, b: &ModelElt) -> ModelElt {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale_elt(&self, c: &Rational, a: &ModelElt) -> ModelElt {
        a.iter().map(|x| x * c).collect()
    }

    /// Integration functional; vanishes outside the top degree.
    pub fn integrate(&self, a: &ModelElt) -> Rational {
        let mut acc = Rational::zero();
        for (i, c) in a.iter().enumerate() {
            if self.basis[i].degree == self.dim {
                acc += c * &self.integrate_row[i];
            }
        }
        acc
    }

    pub fn tangent_tuple(&self) -> ChernTuple<ModelElt> {
        ChernTuple::new(self.tangent.clone())
    }

    /// `e^xi` in the ring, for a class of positive degree.
    pub fn exp_elt(&self, xi: &ModelElt) -> ModelElt {
        let mut acc = self.unit();
        let mut term = self.unit();
        for k in 1..=self.dim {
            term = self.mul_elt(&term, xi);
            term = self.scale_elt(&Rational::new(1.into(), k.into()), &term);
            if term.iter().all(|c| c.is_zero()) {
                break;
            }
            acc = self.add_elt(&acc, &term);
        }
        acc
    }

    /// Validate grading, commutativity, associativity, unit, integration
    /// support and tangent data. Failures carry a concrete witness.
    pub fn validate(&self) -> Result<()> {
        let nb = self.basis.len();
        if self.basis.is_empty() || self.basis[0].degree != 0 {
            return Err(Error::ModelValidation(
                "the first basis element must be the unit in degree 0".into(),
            ));
        }
        if self.indices_of_degree(0).len() != 1 {
            return Err(Error::ModelValidation(
                "degree 0 must consist of the unit alone".into(),
            ));
        }
        if self.basis.iter().any(|b| b.degree > self.dim) {
            return Err(Error::ModelValidation(
                "basis element beyond the top degree".into(),
            ));
        }
        if self.indices_of_degree(self.dim).is_empty() {
            return Err(Error::ModelValidation("no top-degree basis".into()));
        }
        // grading of the multiplication table
        for i in 0..nb {
            for j in 0..nb {
                let d = self.basis[i].degree + self.basis[j].degree;
                for (k, c) in &self.mult[i][j] {
                    if c.is_zero() {
                        continue;
                    }
                    if d > self.dim || self.basis[*k].degree != d {
                        return Err(Error::ModelValidation(format!(
                            "grading violation in {} * {}",
                            self.basis[i].name, self.basis[j].name
                        )));
                    }
                }
            }
        }
        // unit row
        for j in 0..nb {
            let prod = self.mul_elt(&self.unit(), &self.basis_elt(j));
            if prod != self.basis_elt(j) {
                return Err(Error::ModelValidation(format!(
                    "unit does not act trivially on {}",
                    self.basis[j].name
                )));
            }
        }
        // commutativity (all degrees are even, so no signs)
        for i in 0..nb {
            for j in i + 1..nb {
                let ij = self.mul_elt(&self.basis_elt(i), &self.basis_elt(j));
                let ji = self.mul_elt(&self.basis_elt(j), &self.basis_elt(i));
                if ij != ji {
                    return Err(Error::ModelValidation(format!(
                        "commutativity fails on ({}, {})",
                        self.basis[i].name, self.basis[j].name
                    )));
                }
            }
        }
        // associativity, exhaustively over basis triples
        for i in 0..nb {
            for j in 0..nb {
                for k in 0..nb {
                    let ij_k = self.mul_elt(
                        &self.mul_elt(&self.basis_elt(i), &self.basis_elt(j)),
                        &self.basis_elt(k),
                    );
                    let i_jk = self.mul_elt(
                        &self.basis_elt(i),
                        &self.mul_elt(&self.basis_elt(j), &self.basis_elt(k)),
                    );
                    if ij_k != i_jk {
                        return Err(Error::ModelValidation(format!(
                            "associativity fails on the triple ({}, {}, {})",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        )));
                    }
                }
            }
        }
        if self.tangent.len() != self.dim {
            return Err(Error::ModelValidation(format!(
                "expected {} tangent Chern classes, found {}",
                self.dim,
                self.tangent.len()
            )));
        }
        for (i, t) in self.tangent.iter().enumerate() {
            for (k, c) in t.iter().enumerate() {
                if !c.is_zero() && self.basis[k].degree != i + 1 {
                    return Err(Error::ModelValidation(format!(
                        "tangent class c{} is not homogeneous of degree {}",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        for &i in &self.h2_basis {
            if self.basis[i].degree != 1 {
                return Err(Error::ModelValidation(
                    "distinguished degree-2 generator is not of degree 2".into(),
                ));
            }
        }
        if let Some(sq2) = &self.sq2 {
            let d2 = self.indices_of_degree(2).len();
            let d3 = self.indices_of_degree(3).len();
            if sq2.len() != d2 || sq2.iter().any(|row| row.len() != d3) {
                return Err(Error::ModelValidation(
                    "Sq2 table has the wrong shape".into(),
                ));
            }
        }
        Ok(())
    }

    /// Does degree-1 generate every even degree over the rationals?
    pub fn h2_generates(&self) -> bool {
        let mut span_prev: Vec<ModelElt> = vec![self.unit()];
        for d in 1..=self.dim {
            let mut vecs: Vec<ModelElt> = Vec::new();
            for &g in &self.h2_basis {
                for v in &span_prev {
                    vecs.push(self.mul_elt(&self.basis_elt(g), v));
                }
            }
            let dim_d = self.indices_of_degree(d).len();
            let idx = self.indices_of_degree(d);
            let rank = rank_of(
                &vecs
                    .iter()
                    .map(|v| idx.iter().map(|&i| v[i].clone()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            );
            if rank < dim_d {
                return false;
            }
            span_prev = vecs;
        }
        true
    }

    /// Componentwise mod-2 reduction over a degree slice; `None` when some
    /// coefficient is not an integer.
    pub fn mod2_slice(&self, a: &ModelElt, degree: usize) -> Option<Vec<u8>> {
        let mut out = Vec::new();
        for i in self.indices_of_degree(degree) {
            if !a[i].is_integer() {
                return None;
            }
            let r: BigInt = a[i].to_integer() & BigInt::from(1);
            out.push(if r.is_zero() { 0 } else { 1 });
        }
        Some(out)
    }

    /// Apply the Sq2 table to the degree-2 slice of a class (mod 2).
    pub fn apply_sq2(&self, a: &ModelElt) -> Result<Vec<u8>> {
        let table = self.sq2.as_ref().ok_or(Error::MissingSq2)?;
        let a2 = self
            .mod2_slice(a, 2)
            .ok_or_else(|| Error::Mismatch("class has non-integer coefficients".into()))?;
        let d3 = self.indices_of_degree(3).len();
        let mut out = vec![0u8; d3];
        for (r, &bit) in a2.iter().enumerate() {
            if bit == 1 {
                for (c, v) in table[r].iter().enumerate() {
                    out[c] ^= v & 1;
                }
            }
        }
        Ok(out)
    }

    /// Derive the Sq2 table where the ring structure determines it: on a
    /// 3-fold it is multiplication by c1(X); otherwise each degree-2 basis
    /// element must be an integral quadratic expression in the degree-1
    /// generators, and the squaring part of the Cartan formula applies.
    pub fn derive_sq2(&mut self) {
        if self.sq2.is_some() {
            return;
        }
        if self.dim < 3 {
            return;
        }
        let d2_idx = self.indices_of_degree(2);
        let d3_idx = self.indices_of_degree(3);
        if self.dim == 3 {
            // top-degree case: Sq2 = multiplication by c1(X) mod 2
            let c1 = &self.tangent[0];
            let mut table = Vec::new();
            for &i in &d2_idx {
                let prod = self.mul_elt(&self.basis_elt(i), c1);
                match self.mod2_slice(&prod, 3) {
                    Some(row) => table.push(row),
                    None => return,
                }
            }
            self.sq2 = Some(table);
            return;
        }
        // General case: write each degree-2 basis element as an integral
        // combination of products g_a g_b of degree-1 generators, then
        // Sq2(g_a g_b) = g_a^2 g_b + g_a g_b^2 (mod 2).
        let gens = self.h2_basis.clone();
        let mut prods: Vec<(usize, usize, ModelElt)> = Vec::new();
        for (ai, &a) in gens.iter().enumerate() {
            for &b in &gens[ai..] {
                prods.push((a, b, self.mul_elt(&self.basis_elt(a), &self.basis_elt(b))));
            }
        }
        let mut table = Vec::new();
        for &i in &d2_idx {
            let target: Vec<Rational> = d2_idx
                .iter()
                .map(|&k| self.basis_elt(i)[k].clone())
                .collect();
            let cols: Vec<Vec<Rational>> = prods
                .iter()
                .map(|(_, _, p)| d2_idx.iter().map(|&k| p[k].clone()).collect())
                .collect();
            let sol = match solve_integral(&cols, &target) {
                Some(s) => s,
                None => return, // underdetermined lattice; leave the table out
            };
            let mut img = self.zero_elt();
            for (coef, (a, b, _)) in sol.iter().zip(&prods) {
                if coef.is_zero() {
                    continue;
                }
                let ga = self.basis_elt(*a);
                let gb = self.basis_elt(*b);
                let part = self.add_elt(
                    &self.mul_elt(&self.mul_elt(&ga, &ga), &gb),
                    &self.mul_elt(&ga, &self.mul_elt(&gb, &gb)),
                );
                img = self.add_elt(&img, &self.scale_elt(coef, &part));
            }
            match self.mod2_slice(&img, 3) {
                Some(row) => {
                    let _ = &d3_idx;
                    table.push(row)
                }
                None => return,
            }
        }
        self.sq2 = Some(table);
    }
}

/// Rank of a rational matrix given by rows.
fn rank_of(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        if let Some(p) = pivot {
            m.swap(rank, p);
            let inv = m[rank][col].clone().recip();
            for c in col..ncols {
                m[rank][c] = &m[rank][c] * &inv;
            }
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..ncols {
                        let delta = &f * &m[rank][c];
                        m[r][c] -= delta;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Solve `sum_j x_j cols[j] = target` over the rationals and keep the
/// solution only when it is integral. Sufficient for deriving Sq2 tables.
fn solve_integral(cols: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let nrows = target.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        if let Some(p) = pivot {
            m.swap(rank, p);
            let inv = m[rank][col].clone().recip();
            for c in col..=ncols {
                m[rank][c] = &m[rank][c] * &inv;
            }
            for r in 0..nrows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=ncols {
                        let delta = &f * &m[rank][c];
                        m[r][c] -= delta;
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
    }
    // consistency
    for r in rank..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rational::zero(); ncols];
    for (r, c) in pivots {
        sol[c] = m[r][ncols].clone();
    }
    if sol.iter().all(|x| x.is_integer()) {
        Some(sol)
    } else {
        None
    }
}

impl ClassRing for RingModel {
    type Elt = ModelElt;

    fn zero(&self) -> ModelElt {
        self.zero_elt()
    }

    fn one(&self) -> ModelElt {
        self.unit()
    }

    fn add(&self, a: &ModelElt, b: &ModelElt) -> ModelElt {
        self.add_elt(a, b)
    }

    fn mul(&self, a: &ModelElt, b: &ModelElt) -> ModelElt {
        self.mul_elt(a, b)
    }

    fn scale(&self, c: &Rational, a: &ModelElt) -> ModelElt {
        self.scale_elt(c, a)
    }

    fn component(&self, a: &ModelElt, degree: usize) -> ModelElt {
        let mut out = self.zero_elt();
        for i in self.indices_of_degree(degree) {
            out[i] = a[i].clone();
        }
        out
    }

    fn top_degree(&self) -> usize {
        self.dim
    }
}

/// The projective space of complex dimension n: Z[h]/(h^{n+1}), with
/// integral of h^n equal to 1 and tangent classes from (1+h)^{n+1}.
pub fn projective_space(n: usize) -> RingModel {
    assert!(n >= 1);
    let basis: Vec<BasisElt> = (0..=n)
        .map(|k| BasisElt {
            name: match k {
                0 => "1".to_string(),
                1 => "h".to_string(),
                _ => format!("h{k}"),
            },
            degree: k,
        })
        .collect();
    let mut mult = vec![vec![Vec::new(); n + 1]; n + 1];
    #[allow(clippy::needless_range_loop)]
    for i in 0..=n {
        for j in 0..=n {
            if i + j <= n {
                mult[i][j] = vec![(i + j, rat_int(1))];
            }
        }
    }
    let mut integrate_row = vec![Rational::zero(); n + 1];
    integrate_row[n] = rat_int(1);
    // binomial(n+1, k) h^k
    let tangent: Vec<ModelElt> = (1..=n)
        .map(|k| {
            let mut v = vec![Rational::zero(); n + 1];
            let mut b = rat_int(1);
            for t in 0..k {
                b = b * rat_int((n + 1 - t) as i64) / rat_int((t + 1) as i64);
            }
            v[k] = b;
            v
        })
        .collect();
    let mut model = RingModel {
        name: format!("P{n}"),
        dim: n,
        basis,
        mult,
        integrate_row,
        tangent,
        h2_basis: vec![1],
        sq2: None,
    };
    model.derive_sq2();
    model
}

/// Kunneth product of two models. Basis elements are named `a.b`.
pub fn kunneth(x: &RingModel, y: &RingModel) -> RingModel {
    let dim = x.dim + y.dim;
    let mut basis = Vec::new();
    let mut index = BTreeMap::new();
    for (i, bi) in x.basis.iter().enumerate() {
        for (j, bj) in y.basis.iter().enumerate() {
            index.insert((i, j), basis.len());
            let name = if i == 0 && j == 0 {
                "1".to_string()
            } else {
                format!("{}.{}", bi.name, bj.name)
            };
            basis.push(BasisElt {
                name,
                degree: bi.degree + bj.degree,
            });
        }
    }
    let nb = basis.len();
    let mut mult = vec![vec![Vec::new(); nb]; nb];
    for (&(i1, j1), &a) in &index {
        for (&(i2, j2), &b) in &index {
            let mut terms: Vec<(usize, Rational)> = Vec::new();
            for (k1, c1) in &x.mult[i1][i2] {
                for (k2, c2) in &y.mult[j1][j2] {
                    terms.push((index[&(*k1, *k2)], c1 * c2));
                }
            }
            terms.sort_by_key(|(k, _)| *k);
            mult[a][b] = terms;
        }
    }
    let mut integrate_row = vec![Rational::zero(); nb];
    for (&(i, j), &a) in &index {
        if basis[a].degree == dim {
            integrate_row[a] = &x.integrate_row[i] * &y.integrate_row[j];
        }
    }
    // total Chern class of the product: c(T_X) x c(T_Y)
    let embed_x = |v: &ModelElt| -> ModelElt {
        let mut out = vec![Rational::zero(); nb];
        for (i, c) in v.iter().enumerate() {
            out[index[&(i, 0)]] = c.clone();
        }
        out
    };
    let embed_y = |v: &ModelElt| -> ModelElt {
        let mut out = vec![Rational::zero(); nb];
        for (j, c) in v.iter().enumerate() {
            out[index[&(0, j)]] = c.clone();
        }
        out
    };
    let mut h2_basis = Vec::new();
    for &g in &x.h2_basis {
        h2_basis.push(index[&(g, 0)]);
    }
    for &g in &y.h2_basis {
        h2_basis.push(index[&(0, g)]);
    }
    let mut model = RingModel {
        name: format!("{}x{}", x.name, y.name),
        dim,
        basis,
        mult,
        integrate_row,
        tangent: Vec::new(),
        h2_basis,
        sq2: None,
    };
    // assemble tangent classes inside the product ring
    let mut total = model.unit();
    let mut cx = model.unit();
    for t in &x.tangent {
        cx = model.add_elt(&cx, &embed_x(t));
    }
    let mut cy = model.unit();
    for t in &y.tangent {
        cy = model.add_elt(&cy, &embed_y(t));
    }
    total = model.mul_elt(&model.mul_elt(&total, &cx), &cy);
    model.tangent = (1..=dim)
        .map(|d| ClassRing::component(&model, &total, d))
        .collect();
    model.derive_sq2();
    model
}

/// Parse a model from its textual form. The format is line-based:
///
/// ```text
/// name P2
/// dim 2
/// basis 1 0
/// basis h 1
/// basis h2 2
/// mult h h = h2
/// mult h h2 = 0
/// integrate h2 = 1
/// tangent 1 = 3 h
/// tangent 2 = 3 h2
/// h2basis h            # optional; defaults to all degree-1 elements
/// sq2 h2 = 0           # optional, entries mod 2 over the degree-3 basis
/// ```
///
/// `#` starts a comment. Products of positive-degree pairs must be given
/// whenever their total degree fits below the top; pairs may be written in
/// either order. Unknown fields are rejected. The returned model is fully
/// validated.
pub fn ingest_str(input: &str) -> Result<RingModel> {
    let mut name = None;
    let mut dim = None;
    let mut basis: Vec<BasisElt> = Vec::new();
    let mut mult_lines: Vec<(String, String, String)> = Vec::new();
    let mut integrate_lines: Vec<(String, String)> = Vec::new();
    let mut tangent_lines: BTreeMap<usize, String> = BTreeMap::new();
    let mut h2_line: Option<Vec<String>> = None;
    let mut sq2_lines: Vec<(String, String)> = Vec::new();

    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let mut words = line.split_whitespace();
        let field = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        match field {
            "name" => {
                if rest.len() != 1 {
                    return Err(err("expected `name <identifier>`"));
                }
                name = Some(rest[0].to_string());
            }
            "dim" => {
                let d: usize = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("expected `dim <n>`"))?;
                if d == 0 || d > 16 {
                    return Err(err("dimension out of range (1..=16)"));
                }
                dim = Some(d);
            }
            "basis" => {
                if rest.len() != 2 {
                    return Err(err("expected `basis <name> <degree>`"));
                }
                let degree: usize = rest[1]
                    .parse()
                    .map_err(|_| err("basis degree must be a nonnegative integer"))?;
                basis.push(BasisElt {
                    name: rest[0].to_string(),
                    degree,
                });
            }
            "mult" => {
                let joined = rest.join(" ");
                let (lhs, rhs) = joined
                    .split_once('=')
                    .ok_or_else(|| err("expected `mult <a> <b> = <combo>`"))?;
                let ops: Vec<&str> = lhs.split_whitespace().collect();
                if ops.len() != 2 {
                    return Err(err("expected two operand names before `=`"));
                }
                mult_lines.push((ops[0].to_string(), ops[1].to_string(), rhs.trim().to_string()));
            }
            "integrate" => {
                let joined = rest.join(" ");
                let (lhs, rhs) = joined
                    .split_once('=')
                    .ok_or_else(|| err("expected `integrate <name> = <integer>`"))?;
                integrate_lines.push((lhs.trim().to_string(), rhs.trim().to_string()));
            }
            "tangent" => {
                let joined = rest.join(" ");
                let (lhs, rhs) = joined
                    .split_once('=')
                    .ok_or_else(|| err("expected `tangent <i> = <combo>`"))?;
                let i: usize = lhs
                    .trim()
                    .parse()
                    .map_err(|_| err("tangent index must be an integer"))?;
                if i == 0 {
                    return Err(err("tangent index starts at 1"));
                }
                if tangent_lines.insert(i, rhs.trim().to_string()).is_some() {
                    return Err(err("duplicate tangent line"));
                }
            }
            "h2basis" => {
                h2_line = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "sq2" => {
                let joined = rest.join(" ");
                let (lhs, rhs) = joined
                    .split_once('=')
                    .ok_or_else(|| err("expected `sq2 <name> = <combo>`"))?;
                sq2_lines.push((lhs.trim().to_string(), rhs.trim().to_string()));
            }
            other => {
                return Err(err(&format!("unknown field `{other}`")));
            }
        }
    }

    let name = name.ok_or_else(|| Error::Parse("missing `name` line".into()))?;
    let dim = dim.ok_or_else(|| Error::Parse("missing `dim` line".into()))?;
    if basis.is_empty() {
        return Err(Error::Parse("missing `basis` lines".into()));
    }
    {
        let mut names: Vec<&str> = basis.iter().map(|b| b.name.as_str()).collect();
        names.sort();
        names.dedup();
        if names.len() != basis.len() {
            return Err(Error::Parse("duplicate basis names".into()));
        }
    }
    if basis.len() > 512 {
        return Err(Error::Parse("basis too large".into()));
    }

    let mut model = RingModel {
        name,
        dim,
        basis,
        mult: Vec::new(),
        integrate_row: Vec::new(),
        tangent: Vec::new(),
        h2_basis: Vec::new(),
        sq2: None,
    };
    let nb = model.basis.len();
    let names: Vec<String> = model.basis.iter().map(|b| b.name.clone()).collect();
    let lookup = |n: &str| -> Result<usize> {
        names
            .iter()
            .position(|b| b == n)
            .ok_or_else(|| Error::Parse(format!("unknown basis element `{n}`")))
    };
    let parse_combo = |s: &str| parse_name_combo(&names, s);

    // multiplication table
    let mut mult: Vec<Vec<Option<Vec<(usize, Rational)>>>> = vec![vec![None; nb]; nb];
    for j in 0..nb {
        // unit products are implied
        mult[0][j] = Some(vec![(j, rat_int(1))]);
        mult[j][0] = Some(vec![(j, rat_int(1))]);
    }
    for (a, b, rhs) in &mult_lines {
        let i = lookup(a)?;
        let j = lookup(b)?;
        let combo = parse_combo(rhs)?;
        let terms: Vec<(usize, Rational)> = combo
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        for (prev_i, prev_j) in [(i, j), (j, i)] {
            if let Some(prev) = &mult[prev_i][prev_j] {
                if *prev != terms {
                    return Err(Error::Parse(format!(
                        "conflicting products for {a} * {b}"
                    )));
                }
            }
        }
        mult[i][j] = Some(terms.clone());
        mult[j][i] = Some(terms);
    }
    for i in 0..nb {
        for j in 0..nb {
            if mult[i][j].is_none() {
                let d = model.basis[i].degree + model.basis[j].degree;
                if d <= dim {
                    return Err(Error::Parse(format!(
                        "missing product {} * {}",
                        model.basis[i].name, model.basis[j].name
                    )));
                }
                mult[i][j] = Some(Vec::new());
            }
        }
    }
    model.mult = mult
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.unwrap()).collect())
        .collect();

    // integration
    model.integrate_row = vec![Rational::zero(); nb];
    for (name, value) in &integrate_lines {
        let i = lookup(name)?;
        if model.basis[i].degree != dim {
            return Err(Error::Parse(format!(
                "integration assigned outside the top degree: {name}"
            )));
        }
        let v: i64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad integration value `{value}`")))?;
        model.integrate_row[i] = rat_int(v);
    }
    if model
        .integrate_row
        .iter()
        .all(|c| c.is_zero())
    {
        return Err(Error::Parse("integration functional is identically zero".into()));
    }

    // tangent classes
    for i in 1..=dim {
        let line = tangent_lines
            .get(&i)
            .ok_or_else(|| Error::Parse(format!("missing `tangent {i}` line")))?;
        model.tangent.push(parse_combo(line)?);
    }

    // distinguished generators
    model.h2_basis = match h2_line {
        Some(names) => {
            let mut idx = Vec::new();
            for n in names {
                idx.push(lookup(&n)?);
            }
            idx
        }
        None => model.indices_of_degree(1),
    };

    // optional Sq2 table
    if !sq2_lines.is_empty() {
        let d2 = model.indices_of_degree(2);
        let d3 = model.indices_of_degree(3);
        let mut table = vec![vec![0u8; d3.len()]; d2.len()];
        for (lhs, rhs) in &sq2_lines {
            let i = lookup(lhs)?;
            let row = d2
                .iter()
                .position(|&k| k == i)
                .ok_or_else(|| Error::Parse(format!("sq2 source `{lhs}` is not of degree 4")))?;
            let combo = parse_combo(rhs)?;
            for (pos, &k) in d3.iter().enumerate() {
                if !combo[k].is_integer() {
                    return Err(Error::Parse("sq2 entries must be integers".into()));
                }
                let bit: BigInt = combo[k].to_integer() & BigInt::from(1);
                table[row][pos] = if bit.is_zero() { 0 } else { 1 };
            }
        }
        model.sq2 = Some(table);
    }

    model.validate()?;
    if model.sq2.is_none() {
        model.derive_sq2();
    }
    Ok(model)
}

pub fn ingest_file(path: &std::path::Path) -> Result<RingModel> {
    let text = std::fs::read_to_string(path)?;
    ingest_str(&text)
}

/// Parse an integer linear combination of named generators, e.g. `3 h - h2`
/// or `2*x + 5`. A bare integer is a multiple of the first name (the unit).
pub fn parse_name_combo(names: &[String], s: &str) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); names.len()];
    let lookup = |n: &str| -> Result<usize> {
        names
            .iter()
            .position(|b| b == n)
            .ok_or_else(|| Error::Parse(format!("unknown basis element `{n}`")))
    };
    let s = s.trim();
    if s == "0" {
        return Ok(out);
    }
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.trim().to_string()));
                }
                sign = if ch == '-' { -1 } else { 1 };
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur.trim().to_string()));
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("cannot parse combination `{s}`")));
    }
    for (sgn, term) in terms {
        let parts: Vec<&str> = term
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        let (coef, name): (i64, Option<&str>) = match parts.as_slice() {
            [one] => match one.parse::<i64>() {
                Ok(k) => (k, None),
                Err(_) => (1, Some(one)),
            },
            [k, n] => {
                let k: i64 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient `{k}`")))?;
                (k, Some(n))
            }
            _ => return Err(Error::Parse(format!("cannot parse term `{term}`"))),
        };
        match name {
            Some(n) => {
                let idx = lookup(n)?;
                out[idx] += rat_int(sgn * coef);
            }
            None => {
                if coef != 0 {
                    out[0] += rat_int(sgn * coef);
                }
            }
        }
    }
    Ok(out)
}

/// Resolution of a manifold reference: either a finite ring presentation or
/// the flag-manifold backend.
pub enum ManifoldRef {
    Custom(RingModel),
    ProjectiveSpace(usize),
    Flag(FlagTarget),
}

/// Adapter for G/P targets: classes are polynomial representatives on G/B
/// invariant under the parabolic Weyl subgroup.
#[derive(Debug, Clone)]
pub struct FlagTarget {
    pub datum: Arc<RootDatum>,
    /// 0-based indices of the simple roots generating the parabolic.
    pub parabolic: Vec<usize>,
}

impl FlagTarget {
    pub fn new(ctype: CartanType, parabolic: Vec<usize>) -> Result<FlagTarget> {
        let datum = RootDatum::build(ctype)?;
        let mut parabolic = parabolic;
        parabolic.sort_unstable();
        parabolic.dedup();
        if parabolic.iter().any(|&i| i >= datum.rank) {
            return Err(Error::Mismatch("parabolic index out of range".into()));
        }
        Ok(FlagTarget { datum, parabolic })
    }

    /// dim G/P = |Phi+| - |Phi_I+|.
    pub fn dim(&self) -> usize {
        self.datum.num_positive() - self.num_parabolic_positive()
    }

    pub fn num_parabolic_positive(&self) -> usize {
        weyl::parabolic_longest(&self.datum, &self.parabolic).len()
    }

    /// Indices of the simple roots whose fundamental weights form the basis
    /// of H^2(G/P): those alpha for which `w0 s_alpha` is P-saturated.
    pub fn h2_weight_indices(&self) -> Vec<usize> {
        let w0 = weyl::longest(&self.datum);
        (0..self.datum.rank)
            .filter(|&i| {
                let w = weyl::multiply(&self.datum, &w0, &weyl::simple(&self.datum, i));
                weyl::saturated_rep(&self.datum, &w, &self.parabolic) == w
            })
            .collect()
    }
}
