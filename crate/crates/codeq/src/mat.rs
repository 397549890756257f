//! Dense matrices over a [`Field`] and coordinate permutations.
//!
//! Small and unoptimized: everything here runs on codes with at most a few
//! thousand codewords, so plain Gaussian elimination is enough.

use crate::error::Error;
use crate::field::{Fe, Field};
use crate::Result;

/// A row-major dense matrix over a fixed field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    a: Vec<Fe>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.format_element(self.at(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            a: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::BadShape("ragged rows".into()));
        }
        Ok(Mat {
            field: field.clone(),
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Fe {
        self.a[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.a[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Fe> {
        self.row(r).to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c));
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> Mat {
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::BadShape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.at(r, k);
                if lhs.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let t = f.mul(lhs, other.at(k, c));
                    out.set(r, c, f.add(out.at(r, c), t));
                }
            }
        }
        Ok(out)
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn row_mul(&self, v: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.cols];
        for (r, &vr) in v.iter().enumerate() {
            if vr.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] = f.add(out[c], f.mul(vr, self.at(r, c)));
            }
        }
        out
    }

    /// Reduced row echelon form plus the pivot column list.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(src) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if src != row {
                for c in 0..m.cols {
                    let tmp = m.at(row, c);
                    m.set(row, c, m.at(src, c));
                    m.set(src, c, tmp);
                }
            }
            let inv = f.inv(m.at(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                m.set(row, c, f.mul(m.at(row, c), inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.at(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..m.cols {
                    let t = f.sub(m.at(r, c), f.mul(factor, m.at(row, c)));
                    m.set(r, c, t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`.
    pub fn right_kernel(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.at(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * x = b` when the solution is unique; None otherwise.
    pub fn solve(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        if b.len() != self.rows {
            return None;
        }
        let f = &self.field;
        let mut aug = Mat::zero(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        if pivots.len() != self.cols {
            return None; // underdetermined
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.at(i, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix; None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let f = &self.field;
        let n = self.rows;
        let mut aug = Mat::zero(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, n + r, f.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Mat::zero(f, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.at(r, n + c));
            }
        }
        Some(out)
    }

    /// Columns rearranged so that input column `j` lands at `perm[j]`.
    pub fn permute_cols(&self, perm: &Perm) -> Mat {
        assert_eq!(perm.len(), self.cols);
        let mut out = Mat::zero(&self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, perm.image(c), self.at(r, c));
            }
        }
        out
    }

    pub fn scale_col(&mut self, c: usize, s: Fe) {
        for r in 0..self.rows {
            let v = self.field.mul(self.at(r, c), s);
            self.set(r, c, v);
        }
    }

    pub fn scale_row(&mut self, r: usize, s: Fe) {
        for c in 0..self.cols {
            let v = self.field.mul(self.at(r, c), s);
            self.set(r, c, v);
        }
    }

    /// Entrywise Frobenius `x -> x^{p^t}`.
    pub fn frobenius(&self, t: usize) -> Mat {
        let f = self.field.clone();
        self.map(|x| f.frobenius(x, t))
    }
}

/// Permutation sending the listed pivot columns, in order, to the front
/// and keeping the relative order of the rest.
pub(crate) fn pivot_front_perm(pivots: &[usize], n: usize) -> Perm {
    let mut images = vec![usize::MAX; n];
    for (i, &p) in pivots.iter().enumerate() {
        images[p] = i;
    }
    let mut next = pivots.len();
    for img in images.iter_mut() {
        if *img == usize::MAX {
            *img = next;
            next += 1;
        }
    }
    Perm::from_images(images).expect("pivot columns are distinct")
}

/// A permutation of `{0, ..., n-1}` stored as its image list: input
/// position `j` maps to `image(j)`. Applied to a word, the entry at
/// position `j` moves to position `image(j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Build from an image list; must be a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::BadShape("not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn image(&self, j: usize) -> usize {
        self.0[j]
    }
    pub fn images(&self) -> &[usize] {
        &self.0
    }
    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Perm(inv)
    }

    /// `self` then `next`: the result maps `j` to `next(self(j))`.
    pub fn then(&self, next: &Perm) -> Perm {
        assert_eq!(self.len(), next.len());
        Perm(self.0.iter().map(|&i| next.image(i)).collect())
    }

    /// Move the entries of a word: output position `image(j)` holds input
    /// position `j`.
    pub fn apply_word<T: Clone + Default>(&self, w: &[T]) -> Vec<T> {
        assert_eq!(self.len(), w.len());
        let mut out = vec![T::default(); w.len()];
        for (j, v) in w.iter().enumerate() {
            out[self.image(j)] = v.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, 2).unwrap()
    }

    fn sample(f: &Field, seed: u64, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zero(f, rows, cols);
        let mut s = seed.wrapping_add(1);
        for r in 0..rows {
            for c in 0..cols {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                m.set(r, c, Fe((s >> 33) as u32 % f.q() as u32));
            }
        }
        m
    }

    #[test]
    fn rref_is_idempotent_and_preserves_rank() {
        let f = f4();
        for seed in 0..20 {
            let m = sample(&f, seed, 3, 5);
            let (r, piv) = m.rref();
            let (r2, piv2) = r.rref();
            assert_eq!(r, r2);
            assert_eq!(piv, piv2);
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = f4();
        for seed in 0..20 {
            let m = sample(&f, seed, 3, 6);
            for v in m.right_kernel() {
                for r in 0..m.rows() {
                    let dot = (0..m.cols())
                        .fold(Fe::ZERO, |acc, c| f.add(acc, f.mul(m.at(r, c), v[c])));
                    assert!(dot.is_zero());
                }
            }
            assert_eq!(m.right_kernel().len(), m.cols() - m.rank());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f4();
        let mut found = 0;
        for seed in 0..40 {
            let m = sample(&f, seed, 3, 3);
            if let Some(inv) = m.inverse() {
                assert_eq!(m.mul(&inv).unwrap(), Mat::identity(&f, 3));
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn solve_unique_system() {
        let f = f4();
        for seed in 0..40 {
            let m = sample(&f, seed, 3, 3);
            if m.rank() < 3 {
                continue;
            }
            let x = vec![f.e(), f.one(), f.add(f.e(), f.one())];
            let b: Vec<Fe> = (0..3)
                .map(|r| {
                    (0..3).fold(Fe::ZERO, |acc, c| f.add(acc, f.mul(m.at(r, c), x[c])))
                })
                .collect();
            assert_eq!(m.solve(&b).unwrap(), x);
        }
    }

    #[test]
    fn perm_conventions() {
        let p = Perm::from_images(vec![2, 0, 1]).unwrap();
        // position 0 -> 2, 1 -> 0, 2 -> 1
        assert_eq!(p.apply_word(&[10, 20, 30]), vec![20, 30, 10]);
        assert!(p.then(&p.inverse()).is_identity());
        let f = f4();
        let m = Mat::from_rows(&f, vec![vec![f.one(), f.e(), f.zero()]]).unwrap();
        let pm = m.permute_cols(&p);
        assert_eq!(pm.at(0, 2), f.one());
        assert_eq!(pm.at(0, 0), f.e());
        assert_eq!(pm.at(0, 1), f.zero());
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
    }
}
