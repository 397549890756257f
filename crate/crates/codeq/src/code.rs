//! Linear codes over `F_q`: generator matrices, standard form, codeword
//! enumeration, the Hamming metric, the MDS test and conic containment.

use std::collections::HashSet;

use crate::error::Error;
use crate::field::{Fe, Field};
use crate::mat::{Mat, Perm};
use crate::Result;

/// A codeword: one field element per coordinate.
pub type Word = Vec<Fe>;

/// Default ceiling on the number of words an operation may enumerate.
pub const DEFAULT_ENUM_BUDGET: u128 = 1_000_000;

/// Number of coordinates where two equal-length words differ.
pub fn hamming_distance(u: &[Fe], v: &[Fe]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter().zip(v).filter(|(a, b)| a != b).count())
}

/// Number of nonzero coordinates.
pub fn weight(u: &[Fe]) -> usize {
    u.iter().filter(|x| !x.is_zero()).count()
}

/// The Singleton test on raw sizes: `|C| = |F|^{n-d+1}`. Shared by linear,
/// additive and unstructured codes.
pub fn is_mds(size: u128, alphabet: u64, n: usize, d: usize) -> bool {
    if d == 0 || d > n {
        return false;
    }
    let exp = (n - d + 1) as u32;
    match (alphabet as u128).checked_pow(exp) {
        Some(bound) => size == bound,
        None => false,
    }
}

/// A `k x n` matrix over `F_q` with independent rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorMatrix {
    mat: Mat,
}

impl GeneratorMatrix {
    /// Wrap a full-rank matrix; rejects rank-deficient or empty input.
    pub fn new(mat: Mat) -> Result<GeneratorMatrix> {
        if mat.rows() == 0 || mat.rows() > mat.cols() {
            return Err(Error::BadShape(format!(
                "need 1 <= k <= n, got k = {}, n = {}",
                mat.rows(),
                mat.cols()
            )));
        }
        if mat.rank() != mat.rows() {
            return Err(Error::RankDeficient);
        }
        Ok(GeneratorMatrix { mat })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Result<GeneratorMatrix> {
        Self::new(Mat::from_rows(field, rows)?)
    }

    pub fn field(&self) -> &Field {
        self.mat.field()
    }
    pub fn k(&self) -> usize {
        self.mat.rows()
    }
    pub fn n(&self) -> usize {
        self.mat.cols()
    }
    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    /// Weight of each column.
    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.n())
            .map(|c| (0..self.k()).filter(|&r| !self.mat.at(r, c).is_zero()).count())
            .collect()
    }
}

/// Do all columns of both matrices have weight exactly one?
pub fn all_columns_weight_one(a: &GeneratorMatrix, b: &GeneratorMatrix) -> bool {
    a.column_weights().into_iter().all(|w| w == 1)
        && b.column_weights().into_iter().all(|w| w == 1)
}

/// Bring a generator matrix to standard form `(I_k | M)`.
///
/// Pivots are chosen greedily left to right; the returned permutation moves
/// the pivot columns, in order, to positions `0..k` (and keeps the relative
/// order of the rest), so that `permute_cols` of the input followed by row
/// reduction gives exactly the returned matrix. The row space is preserved
/// up to that coordinate permutation.
pub fn standard_form(g: &GeneratorMatrix) -> Result<(GeneratorMatrix, Perm)> {
    let (red, pivots) = g.mat().rref();
    debug_assert_eq!(pivots.len(), g.k());
    let perm = crate::mat::pivot_front_perm(&pivots, g.n());
    let std = GeneratorMatrix::new(red.permute_cols(&perm))?;
    Ok((std, perm))
}

/// A linear code presented by a generator matrix. Codewords are enumerated
/// on demand under an explicit budget.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearCode {
    gen: GeneratorMatrix,
}

impl LinearCode {
    pub fn new(gen: GeneratorMatrix) -> LinearCode {
        LinearCode { gen }
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.gen
    }
    pub fn field(&self) -> &Field {
        self.gen.field()
    }
    pub fn k(&self) -> usize {
        self.gen.k()
    }
    pub fn n(&self) -> usize {
        self.gen.n()
    }

    /// `q^k` as a u128.
    pub fn size(&self) -> u128 {
        (self.field().q() as u128).pow(self.k() as u32)
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

    /// Every codeword, in message order.
    pub fn codewords(&self, budget: u128) -> Result<Vec<Word>> {
        self.check_budget(budget)?;
        let f = self.field();
        let q = f.q() as usize;
        let k = self.k();
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut msg = vec![Fe::ZERO; k];
        loop {
            out.push(self.gen.mat().row_mul(&msg));
            // odometer over messages
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(out);
                }
                let next = msg[i].index() + 1;
                if next < q {
                    msg[i] = f.from_index(next)?;
                    break;
                }
                msg[i] = Fe::ZERO;
                i += 1;
            }
        }
    }

    /// Codewords as a set, for image comparisons.
    pub fn codeword_set(&self, budget: u128) -> Result<HashSet<Word>> {
        Ok(self.codewords(budget)?.into_iter().collect())
    }

    /// Membership test by rank, no enumeration.
    pub fn contains(&self, w: &[Fe]) -> bool {
        if w.len() != self.n() {
            return false;
        }
        let mut rows: Vec<Vec<Fe>> = (0..self.k()).map(|r| self.gen.mat().row_vec(r)).collect();
        rows.push(w.to_vec());
        match Mat::from_rows(self.field(), rows) {
            Ok(m) => m.rank() == self.k(),
            Err(_) => false,
        }
    }

    /// Minimum distance, by enumerating nonzero codeword weights (valid by
    /// linearity).
    pub fn minimum_distance(&self, budget: u128) -> Result<usize> {
        self.check_budget(budget)?;
        let mut min = usize::MAX;
        for w in self.codewords(budget)? {
            let wt = weight(&w);
            if wt > 0 && wt < min {
                min = wt;
            }
        }
        Ok(min)
    }

    /// Weight distribution: `dist[w]` counts codewords of weight `w`.
    pub fn weight_distribution(&self, budget: u128) -> Result<Vec<u64>> {
        self.check_budget(budget)?;
        let mut dist = vec![0u64; self.n() + 1];
        for w in self.codewords(budget)? {
            dist[weight(&w)] += 1;
        }
        Ok(dist)
    }

    /// Singleton test for this code.
    pub fn is_mds(&self, budget: u128) -> Result<bool> {
        let d = self.minimum_distance(budget)?;
        Ok(is_mds(self.size(), self.field().q(), self.n(), d))
    }
}

/// Common surface of the linear and additive code representations:
/// enumerate words under a budget, test membership, report size.
pub trait Code {
    fn field(&self) -> &Field;
    fn len(&self) -> usize;
    fn size(&self) -> u128;
    fn words(&self, budget: u128) -> Result<Vec<Word>>;
    fn contains_word(&self, w: &[Fe]) -> bool;
}

impl Code for LinearCode {
    fn field(&self) -> &Field {
        self.gen.field()
    }
    fn len(&self) -> usize {
        self.n()
    }
    fn size(&self) -> u128 {
        LinearCode::size(self)
    }
    fn words(&self, budget: u128) -> Result<Vec<Word>> {
        self.codewords(budget)
    }
    fn contains_word(&self, w: &[Fe]) -> bool {
        self.contains(w)
    }
}

/// A plane conic: six coefficients of a quadratic form in `x1, x2, x3`,
/// ordered as `x1^2, x2^2, x3^2, x1x2, x1x3, x2x3`. A point lies on the
/// conic when the form vanishes there.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Conic {
    coeffs: [Fe; 6],
}

impl Conic {
    pub fn new(coeffs: [Fe; 6]) -> Result<Conic> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::BadShape("conic coefficients all zero".into()));
        }
        Ok(Conic { coeffs })
    }

    pub fn coeffs(&self) -> &[Fe; 6] {
        &self.coeffs
    }

    pub fn eval(&self, field: &Field, p: &[Fe; 3]) -> Fe {
        let monos = conic_monomials(field, p);
        let mut acc = Fe::ZERO;
        for (c, m) in self.coeffs.iter().zip(monos) {
            acc = field.add(acc, field.mul(*c, m));
        }
        acc
    }

    pub fn contains(&self, field: &Field, p: &[Fe; 3]) -> bool {
        self.eval(field, p).is_zero()
    }

    /// Is `other` a nonzero scalar multiple of this form?
    pub fn proportional_to(&self, field: &Field, other: &Conic) -> bool {
        let mut ratio = None;
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let r = field.div(*b, *a).expect("nonzero");
                    match ratio {
                        None => ratio = Some(r),
                        Some(r0) if r0 == r => {}
                        _ => return false,
                    }
                }
                _ => return false,
            }
        }
        ratio.is_some()
    }
}

fn conic_monomials(field: &Field, p: &[Fe; 3]) -> [Fe; 6] {
    let [x1, x2, x3] = *p;
    [
        field.mul(x1, x1),
        field.mul(x2, x2),
        field.mul(x3, x3),
        field.mul(x1, x2),
        field.mul(x1, x3),
        field.mul(x2, x3),
    ]
}

/// Basis of the space of quadratic forms vanishing on every given point
/// (one linear condition per point, six unknowns). Empty input gives the
/// full six-dimensional space.
pub fn conic_space(field: &Field, points: &[[Fe; 3]]) -> Vec<Conic> {
    let mut sys = Mat::zero(field, points.len(), 6);
    for (r, p) in points.iter().enumerate() {
        for (c, m) in conic_monomials(field, p).into_iter().enumerate() {
            sys.set(r, c, m);
        }
    }
    sys.right_kernel()
        .into_iter()
        .map(|v| Conic {
            coeffs: [v[0], v[1], v[2], v[3], v[4], v[5]],
        })
        .collect()
}

/// The columns of a `3 x n` generator matrix as projective-point candidates.
pub fn columns_as_points(g: &GeneratorMatrix) -> Result<Vec<[Fe; 3]>> {
    if g.k() != 3 {
        return Err(Error::BadShape(format!(
            "conic containment needs k = 3, got k = {}",
            g.k()
        )));
    }
    Ok((0..g.n())
        .map(|c| [g.mat().at(0, c), g.mat().at(1, c), g.mat().at(2, c)])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn f4() -> Field {
        Field::new(2, 2).unwrap()
    }
    fn f9() -> Field {
        Field::new(3, 2).unwrap()
    }

    fn parse_rows(f: &Field, rows: &[&str]) -> Vec<Vec<Fe>> {
        rows.iter()
            .map(|r| {
                r.split_whitespace()
                    .map(|t| f.parse_element(t).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hamming_basics() {
        let f = f9();
        let u = parse_rows(&f, &["0 0 0"]).remove(0);
        let v = parse_rows(&f, &["1 e 0"]).remove(0);
        assert_eq!(hamming_distance(&u, &u).unwrap(), 0);
        assert_eq!(hamming_distance(&u, &v).unwrap(), 2);
        assert_eq!(hamming_distance(&v, &u).unwrap(), 2);
        assert!(hamming_distance(&u, &v[..2]).is_err());
    }

    #[test]
    fn distance_equals_weight_of_difference_on_a_code() {
        let f = f4();
        let g = GeneratorMatrix::from_rows(&f, parse_rows(&f, &["1 0 1 1", "0 1 1 e"])).unwrap();
        let code = LinearCode::new(g);
        let words = code.codewords(DEFAULT_ENUM_BUDGET).unwrap();
        for u in &words {
            for v in &words {
                let diff: Vec<Fe> = u.iter().zip(v).map(|(&a, &b)| f.sub(a, b)).collect();
                assert_eq!(hamming_distance(u, v).unwrap(), weight(&diff));
            }
        }
    }

    #[test]
    fn triangle_inequality_exhaustive_small() {
        let f = f4();
        let g = GeneratorMatrix::from_rows(&f, parse_rows(&f, &["1 0 1 1", "0 1 1 e"])).unwrap();
        let words = LinearCode::new(g).codewords(DEFAULT_ENUM_BUDGET).unwrap();
        for u in &words {
            for v in &words {
                for w in &words {
                    let duv = hamming_distance(u, v).unwrap();
                    let dvw = hamming_distance(v, w).unwrap();
                    let duw = hamming_distance(u, w).unwrap();
                    assert!(duw <= duv + dvw);
                }
            }
        }
    }

    #[test]
    fn standard_form_of_already_standard_matrix_is_identity() {
        let f = f4();
        let g = GeneratorMatrix::from_rows(&f, parse_rows(&f, &["1 0 e 1", "0 1 1 e"])).unwrap();
        let (std, perm) = standard_form(&g).unwrap();
        assert!(perm.is_identity());
        assert_eq!(std, g);
    }

    #[test]
    fn g1_is_already_in_standard_form() {
        let c1 = corpus::c1().unwrap();
        let (std, perm) = standard_form(c1.generator()).unwrap();
        assert!(perm.is_identity());
        assert_eq!(&std, c1.generator());
    }

    #[test]
    fn standard_form_preserves_row_space_as_a_set() {
        let f = f4();
        // seeded random full-rank 2x4 matrices; compare enumerated row
        // spaces (16 words each) after permuting
        for seed in 0..25u64 {
            let mut s = seed.wrapping_add(17);
            let mut rows = vec![vec![Fe::ZERO; 4]; 2];
            for row in rows.iter_mut() {
                for x in row.iter_mut() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                    *x = Fe((s >> 33) as u32 % 4);
                }
            }
            let Ok(g) = GeneratorMatrix::from_rows(&f, rows) else {
                continue;
            };
            let (std, perm) = standard_form(&g).unwrap();
            let orig: HashSet<Word> = LinearCode::new(g)
                .codewords(DEFAULT_ENUM_BUDGET)
                .unwrap()
                .into_iter()
                .map(|w| perm.apply_word(&w))
                .collect();
            let new: HashSet<Word> = LinearCode::new(std)
                .codeword_set(DEFAULT_ENUM_BUDGET)
                .unwrap();
            assert_eq!(orig, new);
        }
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        let f = f4();
        let rows = parse_rows(&f, &["1 0 1 1", "1 0 1 1"]);
        assert!(matches!(
            GeneratorMatrix::from_rows(&f, rows),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn c1_has_minimum_distance_six() {
        let c1 = corpus::c1().unwrap();
        assert_eq!(c1.minimum_distance(DEFAULT_ENUM_BUDGET).unwrap(), 6);
        assert_eq!(c1.size(), 729);
    }

    #[test]
    fn full_space_has_distance_one() {
        let f = f4();
        let g = GeneratorMatrix::new(Mat::identity(&f, 3)).unwrap();
        let code = LinearCode::new(g);
        assert_eq!(code.minimum_distance(DEFAULT_ENUM_BUDGET).unwrap(), 1);
        assert!(code.is_mds(DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn minimum_distance_matches_pairwise_oracle() {
        let f = f4();
        let g = GeneratorMatrix::from_rows(&f, parse_rows(&f, &["1 0 1 1", "0 1 1 e"])).unwrap();
        let code = LinearCode::new(g);
        let words = code.codewords(DEFAULT_ENUM_BUDGET).unwrap();
        // brute-force oracle: minimum over all pairs of distinct words
        let mut pairwise = usize::MAX;
        for i in 0..words.len() {
            for j in (i + 1)..words.len() {
                pairwise = pairwise.min(hamming_distance(&words[i], &words[j]).unwrap());
            }
        }
        assert_eq!(code.minimum_distance(DEFAULT_ENUM_BUDGET).unwrap(), pairwise);
        assert_eq!(pairwise, 3);
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let c1 = corpus::c1().unwrap();
        assert!(matches!(
            c1.minimum_distance(100),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn singleton_test_on_sizes() {
        // C1 shape: n = 8, |C| = 9^3, d = 6
        assert!(is_mds(729, 9, 8, 6));
        // whole space
        assert!(is_mds(64, 4, 3, 1));
        // a [4,2] code over F_4 with d = 2 is not MDS: 16 != 4^3
        assert!(!is_mds(16, 4, 4, 2));
    }

    #[test]
    fn non_mds_code_detected_by_enumeration() {
        let f = f4();
        let g = GeneratorMatrix::from_rows(&f, parse_rows(&f, &["1 0 1 0", "0 1 1 0"])).unwrap();
        let code = LinearCode::new(g);
        assert_eq!(code.minimum_distance(DEFAULT_ENUM_BUDGET).unwrap(), 2);
        assert!(!code.is_mds(DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn mds_k3_every_three_columns_independent() {
        for code in [corpus::c1().unwrap(), corpus::c2().unwrap()] {
            let g = code.generator();
            let f = code.field().clone();
            for a in 0..g.n() {
                for b in (a + 1)..g.n() {
                    for c in (b + 1)..g.n() {
                        let cols = Mat::from_rows(
                            &f,
                            vec![g.mat().col_vec(a), g.mat().col_vec(b), g.mat().col_vec(c)],
                        )
                        .unwrap();
                        assert_eq!(cols.rank(), 3);
                    }
                }
            }
        }
    }

    #[test]
    fn conic_space_of_g2_is_the_expected_line() {
        let c2 = corpus::c2().unwrap();
        let f = c2.field().clone();
        let pts = columns_as_points(c2.generator()).unwrap();
        let basis = conic_space(&f, &pts);
        assert_eq!(basis.len(), 1);
        let target = Conic::new([
            f.zero(),
            f.zero(),
            f.zero(),
            f.one(),
            f.e_pow(3),
            f.one(),
        ])
        .unwrap();
        assert!(basis[0].proportional_to(&f, &target));
        for p in &pts {
            assert!(basis[0].contains(&f, p));
        }
    }

    #[test]
    fn conic_space_of_g1_is_zero() {
        let c1 = corpus::c1().unwrap();
        let f = c1.field().clone();
        let pts = columns_as_points(c1.generator()).unwrap();
        assert!(conic_space(&f, &pts).is_empty());
    }

    #[test]
    fn conic_space_with_no_points_is_six_dimensional() {
        let f = f9();
        assert_eq!(conic_space(&f, &[]).len(), 6);
    }

    #[test]
    fn column_weights_of_g1() {
        let c1 = corpus::c1().unwrap();
        let w = c1.generator().column_weights();
        assert_eq!(w, vec![1, 1, 1, 3, 3, 3, 3, 3]);
        // column 4 is (1, e, e^6)
        let f = c1.field();
        let g = c1.generator().mat();
        assert_eq!(g.at(0, 3), f.one());
        assert_eq!(g.at(1, 3), f.e());
        assert_eq!(g.at(2, 3), f.e_pow(6));
    }

    #[test]
    fn identity_columns_have_weight_one() {
        let f = f4();
        let a = GeneratorMatrix::new(Mat::identity(&f, 3)).unwrap();
        assert!(a.column_weights().iter().all(|&w| w == 1));
        assert!(all_columns_weight_one(&a, &a));
    }

    #[test]
    fn repetition_pattern_has_all_columns_weight_one() {
        let f = f4();
        // k = 2, multiplicities (2, 2)
        let rows = parse_rows(&f, &["1 1 0 0", "0 0 1 1"]);
        let g = GeneratorMatrix::from_rows(&f, rows).unwrap();
        assert!(g.column_weights().iter().all(|&w| w == 1));
    }
}
