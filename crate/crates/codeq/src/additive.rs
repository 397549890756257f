//! Additive codes over `F_q`: prime-subfield-linear codes, their expansion
//! to `F_p`, the block standard form and the additive MDS test.
//!
//! An additive code is the `F_p`-row-span of `kh` generators in `F_q^n`.
//! Distances always count `F_q`-symbol positions, never the `nh` expanded
//! prime-field positions.

use crate::code::{is_mds, weight, Code, Word};
use crate::error::Error;
use crate::field::{Fe, Field, LinearizedMap};
use crate::mat::{Mat, Perm};
use crate::witness::AdditiveWitness;
use crate::{LinearCode, Result};

/// An additive code given by generator rows over `F_q` spanned over `F_p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdditiveCode {
    field: Field,
    /// `kh x n` over `F_q`; rows need not be independent (the effective
    /// dimension is the prime-field rank of the expansion).
    gens: Mat,
    k: usize,
}

impl AdditiveCode {
    /// Build from `kh` generator rows over `F_q`. The row count must be a
    /// multiple of `h`.
    pub fn new(field: &Field, gens: Mat) -> Result<AdditiveCode> {
        let h = field.h();
        if gens.rows() == 0 || gens.rows() % h != 0 {
            return Err(Error::BadShape(format!(
                "row count {} is not a positive multiple of h = {h}",
                gens.rows()
            )));
        }
        if gens.field() != field {
            return Err(Error::FieldMismatch);
        }
        let k = gens.rows() / h;
        Ok(AdditiveCode {
            field: field.clone(),
            gens,
            k,
        })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Result<AdditiveCode> {
        Self::new(field, Mat::from_rows(field, rows)?)
    }

    /// A linear code viewed additively: generators `e^s g_j` grouped by row.
    pub fn from_linear(code: &LinearCode) -> AdditiveCode {
        let f = code.field();
        let h = f.h();
        let mut rows = Vec::with_capacity(code.k() * h);
        for j in 0..code.k() {
            let base = code.generator().mat().row_vec(j);
            for s in 0..h {
                let scale = f.pow(f.e(), s as u64);
                rows.push(base.iter().map(|&x| f.mul(scale, x)).collect());
            }
        }
        AdditiveCode {
            field: f.clone(),
            gens: Mat::from_rows(f, rows).expect("rows are rectangular"),
            k: code.k(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.gens.cols()
    }
    /// Nominal block dimension (`rows / h`).
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn generators(&self) -> &Mat {
        &self.gens
    }

    /// The `kh x nh` prime-field expansion: each entry becomes its
    /// coefficient row vector.
    pub fn expanded(&self) -> Mat {
        expand_matrix(&self.field, &self.gens)
    }

    /// Effective dimension over `F_p`.
    pub fn prime_rank(&self) -> usize {
        self.expanded().rank()
    }

    /// `p^rank`.
    pub fn size(&self) -> u128 {
        (self.field.p() as u128).pow(self.prime_rank() as u32)
    }

    /// Are the generator rows independent over `F_p`?
    pub fn rows_independent(&self) -> bool {
        self.prime_rank() == self.gens.rows()
    }

    /// The code with coordinates permuted.
    pub fn permuted(&self, perm: &Perm) -> AdditiveCode {
        AdditiveCode {
            field: self.field.clone(),
            gens: self.gens.permute_cols(perm),
            k: self.k,
        }
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        if self.size() > budget {
            return Err(Error::EnumerationBudget {
                needed: self.size(),
                budget,
            });
        }
        Ok(())
    }

    /// Every word of the `F_p`-span, as `F_q` words.
    pub fn words(&self, budget: u128) -> Result<Vec<Word>> {
        self.check_budget(budget)?;
        let f = &self.field;
        let fp = f.prime_field();
        let p = f.p() as usize;
        let (red, _) = self.expanded().rref();
        let rank = red.rank();
        let basis: Vec<Vec<Fe>> = (0..rank).map(|r| red.row_vec(r)).collect();
        let nh = self.n() * f.h();
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut digits = vec![0usize; rank.max(1)];
        loop {
            let mut acc = vec![Fe::ZERO; nh];
            for (d, row) in digits.iter().zip(&basis) {
                if *d == 0 {
                    continue;
                }
                let s = fp.from_prime(*d as u64);
                for (a, &x) in acc.iter_mut().zip(row) {
                    *a = fp.add(*a, fp.mul(s, x));
                }
            }
            out.push(regroup_word(f, &acc));
            if rank == 0 {
                return Ok(out);
            }
            let mut i = 0;
            loop {
                if i == rank {
                    return Ok(out);
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Membership over `F_p`, by a rank test on the expansion.
    pub fn contains(&self, w: &[Fe]) -> bool {
        if w.len() != self.n() {
            return false;
        }
        let exp = self.expanded();
        let fp = self.field.prime_field();
        let mut rows: Vec<Vec<Fe>> = (0..exp.rows()).map(|r| exp.row_vec(r)).collect();
        rows.push(expand_word(&self.field, w));
        let stacked = Mat::from_rows(&fp, rows).expect("rectangular");
        stacked.rank() == exp.rank()
    }

    /// Minimum `F_q`-symbol distance, by enumerating nonzero word weights.
    pub fn minimum_distance(&self, budget: u128) -> Result<usize> {
        let mut min = usize::MAX;
        for w in self.words(budget)? {
            let wt = weight(&w);
            if wt > 0 && wt < min {
                min = wt;
            }
        }
        Ok(min)
    }

    /// Weight distribution in `F_q`-symbol weights.
    pub fn weight_distribution(&self, budget: u128) -> Result<Vec<u64>> {
        let mut dist = vec![0u64; self.n() + 1];
        for w in self.words(budget)? {
            dist[weight(&w)] += 1;
        }
        Ok(dist)
    }

    /// Singleton test `|C| = q^{n-d+1}` with distances in `F_q` symbols.
    pub fn is_additive_mds(&self, budget: u128) -> Result<bool> {
        let d = self.minimum_distance(budget)?;
        Ok(is_mds(self.size(), self.field.q(), self.n(), d))
    }

    /// Is the code closed under multiplication by `e` (i.e. actually
    /// `F_q`-linear)? Checked on generators, which suffices by linearity of
    /// multiplication.
    pub fn is_field_linear(&self) -> bool {
        let f = &self.field;
        (0..self.gens.rows()).all(|r| {
            let scaled: Vec<Fe> = self
                .gens
                .row(r)
                .iter()
                .map(|&x| f.mul(f.e(), x))
                .collect();
            self.contains(&scaled)
        })
    }
}

impl Code for AdditiveCode {
    fn field(&self) -> &Field {
        &self.field
    }
    fn len(&self) -> usize {
        self.n()
    }
    fn size(&self) -> u128 {
        AdditiveCode::size(self)
    }
    fn words(&self, budget: u128) -> Result<Vec<Word>> {
        AdditiveCode::words(self, budget)
    }
    fn contains_word(&self, w: &[Fe]) -> bool {
        self.contains(w)
    }
}

/// Expand a matrix over `F_q` to its `rows x (cols*h)` prime-field form,
/// writing each entry as its coefficient row vector.
pub fn expand_matrix(field: &Field, m: &Mat) -> Mat {
    let fp = field.prime_field();
    let h = field.h();
    let mut out = Mat::zero(&fp, m.rows(), m.cols() * h);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            for (d, coeff) in field.coeffs(m.at(r, c)).into_iter().enumerate() {
                out.set(r, c * h + d, fp.from_prime(coeff));
            }
        }
    }
    out
}

/// Expand a word over `F_q` to length `n*h` over `F_p`.
pub fn expand_word(field: &Field, w: &[Fe]) -> Vec<Fe> {
    let fp = field.prime_field();
    let mut out = Vec::with_capacity(w.len() * field.h());
    for &x in w {
        for coeff in field.coeffs(x) {
            out.push(fp.from_prime(coeff));
        }
    }
    out
}

/// Inverse of [`expand_matrix`]: regroup `h` prime-field columns at a time.
pub fn regroup_matrix(field: &Field, m: &Mat) -> Result<Mat> {
    let h = field.h();
    if m.cols() % h != 0 {
        return Err(Error::BadShape(format!(
            "column count {} is not a multiple of h = {h}",
            m.cols()
        )));
    }
    let n = m.cols() / h;
    let mut out = Mat::zero(field, m.rows(), n);
    for r in 0..m.rows() {
        let row = regroup_word(
            field,
            &(0..m.cols()).map(|c| m.at(r, c)).collect::<Vec<_>>(),
        );
        for (c, x) in row.into_iter().enumerate() {
            out.set(r, c, x);
        }
    }
    Ok(out)
}

fn regroup_word(field: &Field, expanded: &[Fe]) -> Word {
    let h = field.h();
    expanded
        .chunks(h)
        .map(|chunk| {
            let coeffs: Vec<u64> = chunk.iter().map(|x| x.index() as u64).collect();
            field.element(&coeffs).expect("digits are reduced")
        })
        .collect()
}

/// The block standard form of an additive code: a `kh x nh` prime-field
/// matrix whose leading `kh x kh` part is the identity, followed by `h x h`
/// blocks. For additive MDS codes every later block is non-singular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdditiveStandardForm {
    field: Field,
    expanded: Mat,
    k: usize,
    n: usize,
}

impl AdditiveStandardForm {
    pub(crate) fn new_unchecked(field: &Field, expanded: Mat, k: usize, n: usize) -> Self {
        AdditiveStandardForm {
            field: field.clone(),
            expanded,
            k,
            n,
        }
    }

    pub fn expanded(&self) -> &Mat {
        &self.expanded
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn n(&self) -> usize {
        self.n
    }

    /// The `h x h` prime-field block in row block `j`, column block `r`.
    pub fn block(&self, j: usize, r: usize) -> Mat {
        let h = self.field.h();
        let fp = self.field.prime_field();
        let mut out = Mat::zero(&fp, h, h);
        for u in 0..h {
            for v in 0..h {
                out.set(u, v, self.expanded.at(j * h + u, r * h + v));
            }
        }
        out
    }

    /// The block at `(j, r)` as the linearized map it applies to message
    /// symbols: coordinate `r` of the codeword of message `(a_1,...,a_k)`
    /// is the sum of `entry_map(j, r)` applied to `a_j`.
    pub fn entry_map(&self, j: usize, r: usize) -> LinearizedMap {
        // messages act as row vectors on the left, so the column-convention
        // matrix of the map is the transpose of the stored block
        LinearizedMap::from_matrix(&self.field, &self.block(j, r).transpose())
            .expect("block has shape h x h")
    }

    /// Are all blocks outside the identity part invertible? True for every
    /// additive MDS code.
    pub fn alpha_blocks_invertible(&self) -> bool {
        let h = self.field.h();
        (0..self.k).all(|j| {
            (self.k..self.n).all(|r| self.block(j, r).rank() == h)
        })
    }

    /// The standard-form generators regrouped over `F_q`.
    pub fn code(&self) -> AdditiveCode {
        let gens = regroup_matrix(&self.field, &self.expanded).expect("shape by construction");
        AdditiveCode {
            field: self.field.clone(),
            gens,
            k: self.k,
        }
    }
}

/// Bring an additive code to block standard form.
///
/// Works by prime-field Gaussian elimination after choosing `k` coordinates
/// whose expanded columns have full rank `kh`: greedy left-to-right first,
/// then an exhaustive subset search when greed fails. Returns the form, the
/// coordinate permutation that was applied, and the additive witness (that
/// permutation with identity maps) carrying the original code onto the
/// returned one.
pub fn additive_standard_form(
    c: &AdditiveCode,
) -> Result<(AdditiveStandardForm, Perm, AdditiveWitness)> {
    let f = c.field().clone();
    let h = f.h();
    let k = c.k();
    let n = c.n();
    let exp = c.expanded();
    if exp.rank() != k * h {
        return Err(Error::DependentRows);
    }

    let block_cols = |sel: &[usize]| -> Mat {
        let fp = f.prime_field();
        let mut m = Mat::zero(&fp, exp.rows(), sel.len() * h);
        for (bi, &b) in sel.iter().enumerate() {
            for r in 0..exp.rows() {
                for d in 0..h {
                    m.set(r, bi * h + d, exp.at(r, b * h + d));
                }
            }
        }
        m
    };

    // greedy selection of pivot coordinates
    let mut sel: Vec<usize> = Vec::with_capacity(k);
    for j in 0..n {
        if sel.len() == k {
            break;
        }
        let mut cand = sel.clone();
        cand.push(j);
        if block_cols(&cand).rank() == cand.len() * h {
            sel = cand;
        }
    }
    if sel.len() < k {
        sel = exhaustive_selection(&block_cols, n, k, h).ok_or(Error::NotStandardizable { k })?;
    }

    // permutation moving the selected coordinates, in order, to the front
    let perm = crate::mat::pivot_front_perm(&sel, n);

    let permuted = c.permuted(&perm);
    let (red, pivots) = permuted.expanded().rref();
    if pivots != (0..k * h).collect::<Vec<_>>() {
        // cannot happen: the selected columns have full rank
        return Err(Error::NotStandardizable { k });
    }

    let form = AdditiveStandardForm {
        field: f.clone(),
        expanded: red,
        k,
        n,
    };
    let witness = AdditiveWitness::new(
        &f,
        perm.clone(),
        (0..n).map(|_| LinearizedMap::identity(&f)).collect(),
    )?;
    Ok((form, perm, witness))
}

fn exhaustive_selection(
    block_cols: &impl Fn(&[usize]) -> Mat,
    n: usize,
    k: usize,
    h: usize,
) -> Option<Vec<usize>> {
    let mut sel = Vec::with_capacity(k);
    fn rec(
        block_cols: &impl Fn(&[usize]) -> Mat,
        sel: &mut Vec<usize>,
        start: usize,
        n: usize,
        k: usize,
        h: usize,
    ) -> bool {
        if sel.len() == k {
            return block_cols(sel).rank() == k * h;
        }
        for j in start..n {
            sel.push(j);
            if rec(block_cols, sel, j + 1, n, k, h) {
                return true;
            }
            sel.pop();
        }
        false
    }
    if rec(block_cols, &mut sel, 0, n, k, h) {
        Some(sel)
    } else {
        None
    }
}
