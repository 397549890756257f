//! Budgeted exhaustive searchers for the four equivalence notions.
//!
//! Every searcher is sound (returned witnesses are re-verified by full
//! enumeration) and complete within its budget: `NotFound` means the whole
//! pruned space was exhausted, `BudgetExceeded` means it was not, and the
//! two are never conflated. Pruning only ever uses proven invariants
//! (weight distributions, per-column frequency profiles, projective rank
//! and conic data), so pruned branches cannot hide a witness.

use crate::additive::AdditiveCode;
use crate::code::{conic_space, Code, LinearCode, Word, DEFAULT_ENUM_BUDGET};
use crate::error::Error;
use crate::field::{Fe, Field, LinearizedMap};
use crate::mat::{Mat, Perm};
use crate::witness::{
    is_equivalence, AdditiveWitness, GeneralWitness, SemiLinearWitness, SymbolPerm, Witness,
};
use crate::Result;

/// A node-expansion budget shared across one search.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    /// Account for `n` nodes; false once the limit is crossed.
    fn tick(&mut self, n: u64) -> bool {
        self.used = self.used.saturating_add(n);
        self.used <= self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// Default node budget for the searchers.
pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

/// Outcome of a search: a verified witness, a certified absence, or an
/// exhausted budget (undecided).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<W> {
    Found(W),
    NotFound,
    BudgetExceeded,
}

impl<W> SearchOutcome<W> {
    pub fn found(self) -> Option<W> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

fn check_pair<C: Code + ?Sized>(a: &C, b: &C) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn weight_distributions_match<C: Code + ?Sized>(a: &C, b: &C) -> Result<bool> {
    let mut da = vec![0u64; a.len() + 1];
    for w in a.words(DEFAULT_ENUM_BUDGET)? {
        da[crate::code::weight(&w)] += 1;
    }
    let mut db = vec![0u64; b.len() + 1];
    for w in b.words(DEFAULT_ENUM_BUDGET)? {
        db[crate::code::weight(&w)] += 1;
    }
    Ok(da == db)
}

// ---------------------------------------------------------------------------
// semi-linear search
// ---------------------------------------------------------------------------

/// Search for a semi-linear witness, trying every Frobenius exponent.
pub fn search_semilinear(
    a: &LinearCode,
    b: &LinearCode,
    budget: &mut Budget,
) -> Result<SearchOutcome<SemiLinearWitness>> {
    let ts: Vec<usize> = (0..a.field().h()).collect();
    search_semilinear_with_exponents(a, b, budget, &ts)
}

/// Search for a monomial (linear, `t = 0`) witness only.
pub fn search_linear(
    a: &LinearCode,
    b: &LinearCode,
    budget: &mut Budget,
) -> Result<SearchOutcome<SemiLinearWitness>> {
    search_semilinear_with_exponents(a, b, budget, &[0])
}

/// Semi-linear search restricted to the given exponents.
///
/// For each exponent the Frobenius image of `a` is matched against `b`
/// column by column under projective invariants; at each complete matching
/// the column scalars are decided exactly by a linear system (the image
/// must be annihilated by the target's parity rows), so the search is
/// complete per permutation.
pub fn search_semilinear_with_exponents(
    a: &LinearCode,
    b: &LinearCode,
    budget: &mut Budget,
    ts: &[usize],
) -> Result<SearchOutcome<SemiLinearWitness>> {
    check_pair(a, b)?;
    if a.size() != b.size() || a.k() != b.k() {
        return Ok(SearchOutcome::NotFound);
    }
    // weight distributions are preserved by any equivalence of linear codes
    if !weight_distributions_match(a, b)? {
        return Ok(SearchOutcome::NotFound);
    }
    let field = a.field().clone();
    let n = a.n();
    let gb = b.generator().mat().clone();
    let parity_b = gb.right_kernel();
    let sig_b = column_signatures(&gb);

    for &t in ts {
        let gat = a.generator().mat().frobenius(t);
        let sig_a = column_signatures(&gat);
        {
            let mut sa = sig_a.clone();
            let mut sb = sig_b.clone();
            sa.sort();
            sb.sort();
            if sa != sb {
                continue; // certified: signatures are monomial invariants
            }
        }
        let mut assigned: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        match match_columns(
            &field, &gat, &gb, &parity_b, &sig_a, &sig_b, &mut assigned, &mut used, budget, t,
            a, b,
        )? {
            ColumnsOutcome::Found(w) => return Ok(SearchOutcome::Found(w)),
            ColumnsOutcome::Exhausted => {}
            ColumnsOutcome::Budget => return Ok(SearchOutcome::BudgetExceeded),
        }
    }
    Ok(SearchOutcome::NotFound)
}

enum ColumnsOutcome {
    Found(SemiLinearWitness),
    Exhausted,
    Budget,
}

#[allow(clippy::too_many_arguments)]
fn match_columns(
    field: &Field,
    gat: &Mat,
    gb: &Mat,
    parity_b: &[Vec<Fe>],
    sig_a: &[Vec<u64>],
    sig_b: &[Vec<u64>],
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    budget: &mut Budget,
    t: usize,
    a: &LinearCode,
    b: &LinearCode,
) -> Result<ColumnsOutcome> {
    let n = gat.cols();
    let pos = assigned.len();
    if pos == n {
        return match solve_diagonal(field, gat, gb, parity_b, assigned, budget)? {
            Some(lambdas) => {
                let mut images = vec![0usize; n];
                for (j, &i) in assigned.iter().enumerate() {
                    images[i] = j;
                }
                let alpha = Perm::from_images(images)?;
                let w = SemiLinearWitness::new(field, alpha, lambdas, t)?;
                debug_assert!(is_equivalence(
                    &Witness::SemiLinear(w.clone()),
                    a,
                    b,
                    DEFAULT_ENUM_BUDGET
                )?);
                Ok(ColumnsOutcome::Found(w))
            }
            None => {
                if budget.used >= budget.limit {
                    Ok(ColumnsOutcome::Budget)
                } else {
                    Ok(ColumnsOutcome::Exhausted)
                }
            }
        };
    }
    for i in 0..n {
        if used[i] || sig_a[i] != sig_b[pos] {
            continue;
        }
        if !budget.tick(1) {
            return Ok(ColumnsOutcome::Budget);
        }
        if !prefix_consistent(field, gat, gb, assigned, i) {
            continue;
        }
        used[i] = true;
        assigned.push(i);
        match match_columns(
            field, gat, gb, parity_b, sig_a, sig_b, assigned, used, budget, t, a, b,
        )? {
            ColumnsOutcome::Exhausted => {}
            other => return Ok(other),
        }
        assigned.pop();
        used[i] = false;
    }
    Ok(ColumnsOutcome::Exhausted)
}

/// Monomial maps preserve every linear dependency among columns, so any
/// rank mismatch on the matched prefix kills the branch for certain.
fn prefix_consistent(field: &Field, gat: &Mat, gb: &Mat, assigned: &[usize], new: usize) -> bool {
    let depth = assigned.len() + 1;
    let k = gat.rows();
    let take = |m: &Mat, cols: &dyn Fn(usize) -> usize| -> Mat {
        let mut out = Mat::zero(field, k, depth);
        for j in 0..depth {
            let c = cols(j);
            for r in 0..k {
                out.set(r, j, m.at(r, c));
            }
        }
        out
    };
    let acols = |j: usize| if j < assigned.len() { assigned[j] } else { new };
    let bcols = |j: usize| j;
    take(gat, &acols).rank() == take(gb, &bcols).rank()
}

/// Exact scalar decision for a fixed column matching: the permuted,
/// scaled Frobenius image lies in the target code iff the scalars satisfy
/// one linear condition per (generator row, parity row) pair. Any kernel
/// vector with all entries nonzero gives the monomial part.
fn solve_diagonal(
    field: &Field,
    gat: &Mat,
    gb: &Mat,
    parity_b: &[Vec<Fe>],
    assigned: &[usize],
    budget: &mut Budget,
) -> Result<Option<Vec<Fe>>> {
    let n = gat.cols();
    let k = gat.rows();
    let _ = gb;
    let rows = k * parity_b.len();
    let mut sys = Mat::zero(field, rows.max(1), n);
    let mut row = 0;
    for g in 0..k {
        for h in parity_b {
            for j in 0..n {
                sys.set(row, j, field.mul(gat.at(g, assigned[j]), h[j]));
            }
            row += 1;
        }
    }
    let kernel = sys.right_kernel();
    all_nonzero_in_span(field, &kernel, budget)
}

/// Find a vector with every entry nonzero in the span of `basis`, walking
/// projective representatives under the budget.
fn all_nonzero_in_span(
    field: &Field,
    basis: &[Vec<Fe>],
    budget: &mut Budget,
) -> Result<Option<Vec<Fe>>> {
    if basis.is_empty() {
        return Ok(None);
    }
    let d = basis.len();
    let q = field.q() as usize;
    let n = basis[0].len();
    // representatives: first nonzero coefficient is 1
    let mut coeff = vec![0usize; d];
    loop {
        // advance odometer
        let mut lead = None;
        for (i, c) in coeff.iter().enumerate() {
            if *c != 0 {
                lead = Some(i);
                break;
            }
        }
        let candidate = match lead {
            Some(l) if coeff[l] == 1 => {
                if !budget.tick(1) {
                    return Ok(None);
                }
                let mut v = vec![Fe::ZERO; n];
                for (i, &c) in coeff.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let s = Fe(c as u32);
                    for (vv, &bv) in v.iter_mut().zip(&basis[i]) {
                        *vv = field.add(*vv, field.mul(s, bv));
                    }
                }
                if v.iter().all(|x| !x.is_zero()) {
                    return Ok(Some(v));
                }
                true
            }
            _ => true,
        };
        let _ = candidate;
        let mut i = 0;
        loop {
            if i == d {
                return Ok(None);
            }
            coeff[i] += 1;
            if coeff[i] < q {
                break;
            }
            coeff[i] = 0;
            i += 1;
        }
    }
}

/// Projective column invariants of a generator matrix, one vector per
/// column: zero flag, projective multiplicity, collinearity counts, and
/// (for `k = 3`) the number of conics through the column and five others.
fn column_signatures(g: &Mat) -> Vec<Vec<u64>> {
    let field = g.field().clone();
    let n = g.cols();
    let k = g.rows();
    let nonzero: Vec<usize> = (0..n)
        .filter(|&c| (0..k).any(|r| !g.at(r, c).is_zero()))
        .collect();
    let col = |c: usize| -> Vec<Fe> { (0..k).map(|r| g.at(r, c)).collect() };
    let proportional = |x: &[Fe], y: &[Fe]| -> bool {
        let m = Mat::from_rows(&field, vec![x.to_vec(), y.to_vec()]).expect("two rows");
        m.rank() <= 1
    };
    (0..n)
        .map(|c| {
            let mut sig = Vec::new();
            let zero = !nonzero.contains(&c);
            sig.push(zero as u64);
            if zero {
                return sig;
            }
            let me = col(c);
            // projective multiplicity
            let mult = nonzero
                .iter()
                .filter(|&&o| proportional(&me, &col(o)))
                .count() as u64;
            sig.push(mult);
            if k >= 3 {
                // collinearity: how many pairs of other columns complete a
                // rank-2 triple with this one
                let mut collinear = 0u64;
                for (ia, &oa) in nonzero.iter().enumerate() {
                    if oa == c {
                        continue;
                    }
                    for &ob in nonzero.iter().skip(ia + 1) {
                        if ob == c {
                            continue;
                        }
                        let m = Mat::from_rows(&field, vec![me.clone(), col(oa), col(ob)])
                            .expect("three rows");
                        if m.rank() == 2 {
                            collinear += 1;
                        }
                    }
                }
                sig.push(collinear);
            }
            if k == 3 && nonzero.len() >= 6 {
                sig.push(conic_degree(&field, g, c, &nonzero));
            }
            sig
        })
        .collect()
}

/// Number of 5-subsets of the other nonzero columns that lie on a common
/// conic with this column.
fn conic_degree(field: &Field, g: &Mat, c: usize, nonzero: &[usize]) -> u64 {
    let others: Vec<usize> = nonzero.iter().copied().filter(|&o| o != c).collect();
    let point = |c: usize| -> [Fe; 3] { [g.at(0, c), g.at(1, c), g.at(2, c)] };
    let mut count = 0u64;
    let mut subset = [0usize; 5];
    fn rec(
        others: &[usize],
        start: usize,
        depth: usize,
        subset: &mut [usize; 5],
        visit: &mut impl FnMut(&[usize; 5]),
    ) {
        if depth == 5 {
            visit(subset);
            return;
        }
        for i in start..others.len() {
            subset[depth] = others[i];
            rec(others, i + 1, depth + 1, subset, visit);
        }
    }
    rec(&others, 0, 0, &mut subset, &mut |s| {
        let pts: Vec<[Fe; 3]> = s.iter().map(|&o| point(o)).chain([point(c)]).collect();
        if !conic_space(field, &pts).is_empty() {
            count += 1;
        }
    });
    count
}

// ---------------------------------------------------------------------------
// general search
// ---------------------------------------------------------------------------

/// Search for a general witness: backtracking over coordinate matchings
/// pruned by per-column symbol-frequency profiles, then per-coordinate
/// symbol maps grown by matching codewords one at a time.
pub fn search_general(
    a: &LinearCode,
    b: &LinearCode,
    budget: &mut Budget,
) -> Result<SearchOutcome<GeneralWitness>> {
    check_pair(a, b)?;
    if a.size() != b.size() {
        return Ok(SearchOutcome::NotFound);
    }
    if !weight_distributions_match(a, b)? {
        return Ok(SearchOutcome::NotFound);
    }
    let field = a.field().clone();
    let n = a.n();
    let words_a = a.codewords(DEFAULT_ENUM_BUDGET)?;
    let words_b = b.codewords(DEFAULT_ENUM_BUDGET)?;
    let sig_a = frequency_signatures(&field, &words_a, n, false);
    let sig_b = frequency_signatures(&field, &words_b, n, false);
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(SearchOutcome::NotFound);
        }
    }

    let mut assigned = Vec::with_capacity(n);
    let mut used = vec![false; n];
    match general_alpha_dfs(
        &field, &words_a, &words_b, &sig_a, &sig_b, &mut assigned, &mut used, budget, a, b,
    )? {
        GeneralOutcome::Found(w) => Ok(SearchOutcome::Found(w)),
        GeneralOutcome::Exhausted => Ok(SearchOutcome::NotFound),
        GeneralOutcome::Budget => Ok(SearchOutcome::BudgetExceeded),
    }
}

enum GeneralOutcome {
    Found(GeneralWitness),
    Exhausted,
    Budget,
}

#[allow(clippy::too_many_arguments)]
fn general_alpha_dfs(
    field: &Field,
    words_a: &[Word],
    words_b: &[Word],
    sig_a: &[Vec<u64>],
    sig_b: &[Vec<u64>],
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    budget: &mut Budget,
    a: &LinearCode,
    b: &LinearCode,
) -> Result<GeneralOutcome> {
    let n = sig_a.len();
    let pos = assigned.len();
    if pos == n {
        let mut images = vec![0usize; n];
        for (j, &i) in assigned.iter().enumerate() {
            images[i] = j;
        }
        let alpha = Perm::from_images(images)?;
        let moved: Vec<Word> = words_a.iter().map(|w| alpha.apply_word(w)).collect();
        return match sigma_matching(field, &moved, words_b, budget)? {
            Some(sigmas) => {
                let w = GeneralWitness::new(field, alpha, sigmas)?;
                debug_assert!(is_equivalence(
                    &Witness::General(w.clone()),
                    a,
                    b,
                    DEFAULT_ENUM_BUDGET
                )?);
                Ok(GeneralOutcome::Found(w))
            }
            None => {
                if budget.used >= budget.limit {
                    Ok(GeneralOutcome::Budget)
                } else {
                    Ok(GeneralOutcome::Exhausted)
                }
            }
        };
    }
    for i in 0..n {
        if used[i] || sig_a[i] != sig_b[pos] {
            continue;
        }
        if !budget.tick(1) {
            return Ok(GeneralOutcome::Budget);
        }
        used[i] = true;
        assigned.push(i);
        match general_alpha_dfs(
            field, words_a, words_b, sig_a, sig_b, assigned, used, budget, a, b,
        )? {
            GeneralOutcome::Exhausted => {}
            other => return Ok(other),
        }
        assigned.pop();
        used[i] = false;
    }
    Ok(GeneralOutcome::Exhausted)
}

/// Grow per-coordinate bijections by matching source words to target words
/// one at a time; any complete matching gives a witness.
fn sigma_matching(
    field: &Field,
    words_a: &[Word],
    words_b: &[Word],
    budget: &mut Budget,
) -> Result<Option<Vec<SymbolPerm>>> {
    let n = words_a.first().map_or(0, |w| w.len());
    let q = field.q() as usize;
    let mut sigma = vec![vec![None; q]; n];
    let mut sigma_inv = vec![vec![None; q]; n];
    let mut used = vec![false; words_b.len()];

    fn dfs(
        field: &Field,
        words_a: &[Word],
        words_b: &[Word],
        sigma: &mut Vec<Vec<Option<Fe>>>,
        sigma_inv: &mut Vec<Vec<Option<Fe>>>,
        used: &mut Vec<bool>,
        depth: usize,
        budget: &mut Budget,
    ) -> Option<bool> {
        // None = budget exhausted, Some(found)
        if depth == words_a.len() {
            return Some(true);
        }
        let u = &words_a[depth];
        'cand: for (bi, bw) in words_b.iter().enumerate() {
            if used[bi] {
                continue;
            }
            if !budget.tick(1) {
                return None;
            }
            for i in 0..u.len() {
                let (x, y) = (u[i], bw[i]);
                if let Some(img) = sigma[i][x.index()] {
                    if img != y {
                        continue 'cand;
                    }
                }
                if let Some(pre) = sigma_inv[i][y.index()] {
                    if pre != x {
                        continue 'cand;
                    }
                }
            }
            // assign with a trail for undo
            let mut trail = Vec::new();
            for i in 0..u.len() {
                let (x, y) = (u[i], bw[i]);
                if sigma[i][x.index()].is_none() {
                    sigma[i][x.index()] = Some(y);
                    sigma_inv[i][y.index()] = Some(x);
                    trail.push((i, x, y));
                }
            }
            used[bi] = true;
            match dfs(
                field, words_a, words_b, sigma, sigma_inv, used, depth + 1, budget,
            ) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            used[bi] = false;
            for (i, x, y) in trail {
                sigma[i][x.index()] = None;
                sigma_inv[i][y.index()] = None;
            }
        }
        Some(false)
    }

    match dfs(
        field,
        words_a,
        words_b,
        &mut sigma,
        &mut sigma_inv,
        &mut used,
        0,
        budget,
    ) {
        None => Ok(None),
        Some(false) => Ok(None),
        Some(true) => {
            // complete each partial bijection over the unused symbols
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let mut table = vec![Fe::ZERO; q];
                let mut taken = vec![false; q];
                for (x, img) in sigma[i].iter().enumerate() {
                    if let Some(y) = img {
                        table[x] = *y;
                        taken[y.index()] = true;
                    }
                }
                let mut free: Vec<usize> = (0..q).filter(|&y| !taken[y]).collect();
                free.reverse();
                for (x, img) in sigma[i].iter().enumerate() {
                    if img.is_none() {
                        table[x] = Fe(free.pop().expect("counts match") as u32);
                    }
                }
                out.push(SymbolPerm::new(field, table)?);
            }
            Ok(Some(out))
        }
    }
}

/// Per-column symbol frequency profiles over the enumerated words. Sorted
/// so they are invariant under relabeling; with `fix_zero` the frequency of
/// the zero symbol is kept separate (additive maps fix zero).
fn frequency_signatures(field: &Field, words: &[Word], n: usize, fix_zero: bool) -> Vec<Vec<u64>> {
    let q = field.q() as usize;
    (0..n)
        .map(|c| {
            let mut counts = vec![0u64; q];
            for w in words {
                counts[w[c].index()] += 1;
            }
            let zero = counts[0];
            let mut rest: Vec<u64> = counts[1..].to_vec();
            rest.sort();
            let mut sig = Vec::with_capacity(q + 1);
            if fix_zero {
                sig.push(zero);
            } else {
                rest.push(zero);
                rest.sort();
            }
            sig.extend(rest);
            sig
        })
        .collect()
}

// ---------------------------------------------------------------------------
// additive search
// ---------------------------------------------------------------------------

/// Search for an additive witness between additive codes.
///
/// For each coordinate matching (pruned by zero-aware frequency profiles)
/// the per-coordinate invertible maps are decided exactly: mapping the
/// source basis into the target code is linear in the matrix entries of
/// the maps, so the candidates form the kernel of a prime-field system and
/// it suffices to scan it for a member with every block invertible.
pub fn search_additive(
    a: &AdditiveCode,
    b: &AdditiveCode,
    budget: &mut Budget,
) -> Result<SearchOutcome<AdditiveWitness>> {
    check_pair(a, b)?;
    if a.size() != b.size() {
        return Ok(SearchOutcome::NotFound);
    }
    if !weight_distributions_match(a, b)? {
        return Ok(SearchOutcome::NotFound);
    }
    let field = a.field().clone();
    let n = a.n();
    let words_a = a.words(DEFAULT_ENUM_BUDGET)?;
    let words_b = b.words(DEFAULT_ENUM_BUDGET)?;
    let sig_a = frequency_signatures(&field, &words_a, n, true);
    let sig_b = frequency_signatures(&field, &words_b, n, true);
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(SearchOutcome::NotFound);
        }
    }

    let (basis_a, _) = a.expanded().rref();
    let (basis_b, _) = b.expanded().rref();
    let basis_a: Vec<Vec<Fe>> = (0..basis_a.rank()).map(|r| basis_a.row_vec(r)).collect();
    let parity_b = {
        let rows: Vec<Vec<Fe>> = (0..basis_b.rank()).map(|r| basis_b.row_vec(r)).collect();
        Mat::from_rows(&field.prime_field(), rows)?.right_kernel()
    };

    let mut assigned = Vec::with_capacity(n);
    let mut used = vec![false; n];
    match additive_alpha_dfs(
        &field, &basis_a, &parity_b, &sig_a, &sig_b, &mut assigned, &mut used, budget, a, b,
    )? {
        AdditiveOutcome::Found(w) => Ok(SearchOutcome::Found(w)),
        AdditiveOutcome::Exhausted => Ok(SearchOutcome::NotFound),
        AdditiveOutcome::Budget => Ok(SearchOutcome::BudgetExceeded),
    }
}

enum AdditiveOutcome {
    Found(AdditiveWitness),
    Exhausted,
    Budget,
}

#[allow(clippy::too_many_arguments)]
fn additive_alpha_dfs(
    field: &Field,
    basis_a: &[Vec<Fe>],
    parity_b: &[Vec<Fe>],
    sig_a: &[Vec<u64>],
    sig_b: &[Vec<u64>],
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    budget: &mut Budget,
    a: &AdditiveCode,
    b: &AdditiveCode,
) -> Result<AdditiveOutcome> {
    let n = sig_a.len();
    let pos = assigned.len();
    if pos == n {
        return match solve_blocks(field, basis_a, parity_b, assigned, budget)? {
            Some(maps) => {
                let mut images = vec![0usize; n];
                for (j, &i) in assigned.iter().enumerate() {
                    images[i] = j;
                }
                let alpha = Perm::from_images(images)?;
                let w = AdditiveWitness::new(field, alpha, maps)?;
                if !is_equivalence(&Witness::Additive(w.clone()), a, b, DEFAULT_ENUM_BUDGET)? {
                    return Err(Error::InvalidWitness(
                        "block solver produced an unverified witness".into(),
                    ));
                }
                Ok(AdditiveOutcome::Found(w))
            }
            None => {
                if budget.used >= budget.limit {
                    Ok(AdditiveOutcome::Budget)
                } else {
                    Ok(AdditiveOutcome::Exhausted)
                }
            }
        };
    }
    for i in 0..n {
        if used[i] || sig_a[i] != sig_b[pos] {
            continue;
        }
        if !budget.tick(1) {
            return Ok(AdditiveOutcome::Budget);
        }
        used[i] = true;
        assigned.push(i);
        match additive_alpha_dfs(
            field, basis_a, parity_b, sig_a, sig_b, assigned, used, budget, a, b,
        )? {
            AdditiveOutcome::Exhausted => {}
            other => return Ok(other),
        }
        assigned.pop();
        used[i] = false;
    }
    Ok(AdditiveOutcome::Exhausted)
}

/// Decide the per-coordinate maps for a fixed matching. Unknowns are the
/// `n` matrices over `F_p`; each (source basis row, target parity row)
/// pair contributes one linear equation. Returns maps with every block
/// invertible, or None.
fn solve_blocks(
    field: &Field,
    basis_a: &[Vec<Fe>],
    parity_b: &[Vec<Fe>],
    assigned: &[usize],
    budget: &mut Budget,
) -> Result<Option<Vec<LinearizedMap>>> {
    let fp = field.prime_field();
    let h = field.h();
    let n = assigned.len();
    let vars = n * h * h;
    let rows = basis_a.len() * parity_b.len();
    if !budget.tick(rows as u64) {
        return Ok(None);
    }
    let mut sys = Mat::zero(&fp, rows.max(1), vars);
    let mut row = 0;
    for g in basis_a {
        for pr in parity_b {
            for j in 0..n {
                let src = assigned[j];
                for u in 0..h {
                    let hcoef = pr[j * h + u];
                    if hcoef.is_zero() {
                        continue;
                    }
                    for v in 0..h {
                        let gcoef = g[src * h + v];
                        if gcoef.is_zero() {
                            continue;
                        }
                        let var = j * h * h + u * h + v;
                        let cur = sys.at(row, var);
                        sys.set(row, var, fp.add(cur, fp.mul(hcoef, gcoef)));
                    }
                }
            }
            row += 1;
        }
    }
    let kernel = sys.right_kernel();
    if kernel.is_empty() {
        return Ok(None);
    }
    // scan projective representatives for a solution with all blocks
    // invertible (scaling preserves invertibility)
    let d = kernel.len();
    let p = fp.q() as usize;
    let mut coeff = vec![0usize; d];
    loop {
        let lead = coeff.iter().position(|&c| c != 0);
        if let Some(l) = lead {
            if coeff[l] == 1 {
                if !budget.tick(1) {
                    return Ok(None);
                }
                let mut v = vec![Fe::ZERO; vars];
                for (i, &c) in coeff.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let s = Fe(c as u32);
                    for (vv, &bv) in v.iter_mut().zip(&kernel[i]) {
                        *vv = fp.add(*vv, fp.mul(s, bv));
                    }
                }
                if let Some(maps) = blocks_if_invertible(field, &fp, &v, n, h) {
                    return Ok(Some(maps));
                }
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(None);
            }
            coeff[i] += 1;
            if coeff[i] < p {
                break;
            }
            coeff[i] = 0;
            i += 1;
        }
    }
}

fn blocks_if_invertible(
    field: &Field,
    fp: &Field,
    v: &[Fe],
    n: usize,
    h: usize,
) -> Option<Vec<LinearizedMap>> {
    let mut maps = Vec::with_capacity(n);
    for j in 0..n {
        let mut m = Mat::zero(fp, h, h);
        for u in 0..h {
            for w in 0..h {
                m.set(u, w, v[j * h * h + u * h + w]);
            }
        }
        if m.rank() != h {
            return None;
        }
        maps.push(LinearizedMap::from_matrix(field, &m).expect("h x h"));
    }
    Some(maps)
}
