//! Explicit equivalence witnesses.
//!
//! A witness is a coordinate permutation plus one symbol map per coordinate;
//! the three flavours differ only in what the per-coordinate maps are
//! allowed to be. Every witness can be applied to words and verified against
//! a pair of codes by full enumeration — nothing here is ever taken on
//! trust.

use std::collections::HashSet;

use crate::code::{hamming_distance, Code, Word};
use crate::error::Error;
use crate::field::{Fe, Field, LinearizedMap};
use crate::mat::Perm;
use crate::Result;

/// A bijection of the field, stored as its value table in canonical
/// element order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolPerm {
    table: Vec<Fe>,
}

impl SymbolPerm {
    pub fn new(field: &Field, table: Vec<Fe>) -> Result<SymbolPerm> {
        if table.len() as u64 != field.q() {
            return Err(Error::LengthMismatch {
                left: table.len(),
                right: field.q() as usize,
            });
        }
        let mut seen = vec![false; table.len()];
        for &v in &table {
            if v.index() >= table.len() || seen[v.index()] {
                return Err(Error::NotBijective);
            }
            seen[v.index()] = true;
        }
        Ok(SymbolPerm { table })
    }

    pub fn identity(field: &Field) -> SymbolPerm {
        SymbolPerm {
            table: field.elements().collect(),
        }
    }

    /// Build from any bijective function of the field.
    pub fn from_fn(field: &Field, f: impl Fn(Fe) -> Fe) -> Result<SymbolPerm> {
        Self::new(field, field.elements().map(f).collect())
    }

    pub fn apply(&self, x: Fe) -> Fe {
        self.table[x.index()]
    }

    pub fn table(&self) -> &[Fe] {
        &self.table
    }

    pub fn inverse(&self) -> SymbolPerm {
        let mut inv = vec![Fe::ZERO; self.table.len()];
        for (i, &v) in self.table.iter().enumerate() {
            inv[v.index()] = Fe(i as u32);
        }
        SymbolPerm { table: inv }
    }
}

/// Arbitrary per-coordinate symbol permutations after a coordinate
/// permutation: the most general notion of equivalence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralWitness {
    field: Field,
    alpha: Perm,
    sigmas: Vec<SymbolPerm>,
}

/// Per-coordinate maps `x -> lambda_i x^{p^t}` with a single Frobenius
/// exponent `t`; `t = 0` is plain linear (monomial) equivalence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemiLinearWitness {
    field: Field,
    alpha: Perm,
    lambdas: Vec<Fe>,
    t: usize,
}

/// Per-coordinate invertible additive maps (linearized permutations).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdditiveWitness {
    field: Field,
    alpha: Perm,
    maps: Vec<LinearizedMap>,
}

impl GeneralWitness {
    pub fn new(field: &Field, alpha: Perm, sigmas: Vec<SymbolPerm>) -> Result<GeneralWitness> {
        if alpha.len() != sigmas.len() {
            return Err(Error::LengthMismatch {
                left: alpha.len(),
                right: sigmas.len(),
            });
        }
        Ok(GeneralWitness {
            field: field.clone(),
            alpha,
            sigmas,
        })
    }

    pub fn identity(field: &Field, n: usize) -> GeneralWitness {
        GeneralWitness {
            field: field.clone(),
            alpha: Perm::identity(n),
            sigmas: (0..n).map(|_| SymbolPerm::identity(field)).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn alpha(&self) -> &Perm {
        &self.alpha
    }
    pub fn sigmas(&self) -> &[SymbolPerm] {
        &self.sigmas
    }
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn apply(&self, u: &[Fe]) -> Word {
        let moved = self.alpha.apply_word(u);
        moved
            .iter()
            .enumerate()
            .map(|(i, &x)| self.sigmas[i].apply(x))
            .collect()
    }

    /// The vector `(sigma_1(0), ..., sigma_n(0))`. For a valid witness
    /// between linear codes this lies in the target code.
    pub fn translation_component(&self) -> TranslationVector {
        TranslationVector {
            v: self.sigmas.iter().map(|s| s.apply(Fe::ZERO)).collect(),
        }
    }

    /// Compose with a translation applied after the symbol maps:
    /// `sigma_i'(x) = sigma_i(x) + v_i`. Keeps the witness valid exactly
    /// when `v` is a codeword of the target code.
    pub fn with_translation(&self, v: &[Fe]) -> Result<GeneralWitness> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch {
                left: v.len(),
                right: self.n(),
            });
        }
        let f = &self.field;
        let sigmas = self
            .sigmas
            .iter()
            .zip(v)
            .map(|(s, &vi)| SymbolPerm::from_fn(f, |x| f.add(s.apply(x), vi)))
            .collect::<Result<_>>()?;
        GeneralWitness::new(f, self.alpha.clone(), sigmas)
    }
}

impl SemiLinearWitness {
    pub fn new(field: &Field, alpha: Perm, lambdas: Vec<Fe>, t: usize) -> Result<SemiLinearWitness> {
        if alpha.len() != lambdas.len() {
            return Err(Error::LengthMismatch {
                left: alpha.len(),
                right: lambdas.len(),
            });
        }
        if lambdas.iter().any(|l| l.is_zero()) {
            return Err(Error::InvalidWitness("zero scaling factor".into()));
        }
        if t >= field.h() {
            return Err(Error::InvalidWitness(format!(
                "Frobenius exponent {t} out of range for h = {}",
                field.h()
            )));
        }
        Ok(SemiLinearWitness {
            field: field.clone(),
            alpha,
            lambdas,
            t,
        })
    }

    pub fn identity(field: &Field, n: usize) -> SemiLinearWitness {
        SemiLinearWitness {
            field: field.clone(),
            alpha: Perm::identity(n),
            lambdas: vec![Fe::ONE; n],
            t: 0,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn alpha(&self) -> &Perm {
        &self.alpha
    }
    pub fn lambdas(&self) -> &[Fe] {
        &self.lambdas
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn apply(&self, u: &[Fe]) -> Word {
        let f = &self.field;
        let moved = self.alpha.apply_word(u);
        moved
            .iter()
            .enumerate()
            .map(|(i, &x)| f.mul(self.lambdas[i], f.frobenius(x, self.t)))
            .collect()
    }

    pub fn to_general(&self) -> GeneralWitness {
        let f = &self.field;
        let sigmas = self
            .lambdas
            .iter()
            .map(|&l| {
                SymbolPerm::from_fn(f, |x| f.mul(l, f.frobenius(x, self.t)))
                    .expect("twisted scaling is bijective")
            })
            .collect();
        GeneralWitness {
            field: f.clone(),
            alpha: self.alpha.clone(),
            sigmas,
        }
    }

    pub fn to_additive(&self) -> AdditiveWitness {
        let f = &self.field;
        let maps = self
            .lambdas
            .iter()
            .map(|&l| LinearizedMap::twisted_scalar(f, l, self.t))
            .collect();
        AdditiveWitness {
            field: f.clone(),
            alpha: self.alpha.clone(),
            maps,
        }
    }
}

impl AdditiveWitness {
    pub fn new(field: &Field, alpha: Perm, maps: Vec<LinearizedMap>) -> Result<AdditiveWitness> {
        if alpha.len() != maps.len() {
            return Err(Error::LengthMismatch {
                left: alpha.len(),
                right: maps.len(),
            });
        }
        for m in &maps {
            if !m.is_permutation(field) {
                return Err(Error::InvalidWitness(
                    "additive map is not invertible".into(),
                ));
            }
        }
        Ok(AdditiveWitness {
            field: field.clone(),
            alpha,
            maps,
        })
    }

    pub fn identity(field: &Field, n: usize) -> AdditiveWitness {
        AdditiveWitness {
            field: field.clone(),
            alpha: Perm::identity(n),
            maps: (0..n).map(|_| LinearizedMap::identity(field)).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn alpha(&self) -> &Perm {
        &self.alpha
    }
    pub fn maps(&self) -> &[LinearizedMap] {
        &self.maps
    }
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn apply(&self, u: &[Fe]) -> Word {
        let f = &self.field;
        let moved = self.alpha.apply_word(u);
        moved
            .iter()
            .enumerate()
            .map(|(i, &x)| self.maps[i].eval(f, x))
            .collect()
    }

    pub fn to_general(&self) -> GeneralWitness {
        let f = &self.field;
        let sigmas = self
            .maps
            .iter()
            .map(|m| {
                SymbolPerm::new(f, m.table(f)).expect("invertible map gives a bijection")
            })
            .collect();
        GeneralWitness {
            field: f.clone(),
            alpha: self.alpha.clone(),
            sigmas,
        }
    }
}

/// The translation part of a general witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TranslationVector {
    v: Word,
}

impl TranslationVector {
    pub fn word(&self) -> &[Fe] {
        &self.v
    }

    /// Membership check in the target code; failure means the witness it
    /// came from cannot be valid.
    pub fn verify_in<C: Code + ?Sized>(&self, target: &C) -> Result<()> {
        if target.contains_word(&self.v) {
            Ok(())
        } else {
            Err(Error::InvalidWitness(
                "translation component is not a codeword of the target code".into(),
            ))
        }
    }
}

/// Any of the three witness kinds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    General(GeneralWitness),
    SemiLinear(SemiLinearWitness),
    Additive(AdditiveWitness),
}

impl Witness {
    pub fn field(&self) -> &Field {
        match self {
            Witness::General(w) => w.field(),
            Witness::SemiLinear(w) => w.field(),
            Witness::Additive(w) => w.field(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Witness::General(w) => w.n(),
            Witness::SemiLinear(w) => w.n(),
            Witness::Additive(w) => w.n(),
        }
    }

    pub fn alpha(&self) -> &Perm {
        match self {
            Witness::General(w) => w.alpha(),
            Witness::SemiLinear(w) => w.alpha(),
            Witness::Additive(w) => w.alpha(),
        }
    }

    pub fn apply(&self, u: &[Fe]) -> Word {
        match self {
            Witness::General(w) => w.apply(u),
            Witness::SemiLinear(w) => w.apply(u),
            Witness::Additive(w) => w.apply(u),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Witness::General(_) => "general",
            Witness::SemiLinear(_) => "semilinear",
            Witness::Additive(_) => "additive",
        }
    }

    pub fn to_general(&self) -> GeneralWitness {
        match self {
            Witness::General(w) => w.clone(),
            Witness::SemiLinear(w) => w.to_general(),
            Witness::Additive(w) => w.to_general(),
        }
    }
}

/// Apply a witness of any kind to a word.
pub fn apply_witness(w: &Witness, u: &[Fe]) -> Word {
    w.apply(u)
}

/// Does the witness map the word set of `a` exactly onto the word set of
/// `b`? Full enumeration of both codes; returns an error only on structural
/// mismatch or a blown enumeration budget.
pub fn is_equivalence<C: Code + ?Sized>(
    w: &Witness,
    a: &C,
    b: &C,
    budget: u128,
) -> Result<bool> {
    if w.field() != a.field() || w.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.len() != b.len() || w.n() != a.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    let target: HashSet<Word> = b.words(budget)?.into_iter().collect();
    let mut image = HashSet::with_capacity(target.len());
    for u in a.words(budget)? {
        let y = w.apply(&u);
        if !target.contains(&y) {
            return Ok(false);
        }
        image.insert(y);
    }
    Ok(image.len() == target.len())
}

/// Distance preservation `d(u,v) = d(psi(u), psi(v))` over all pairs of
/// words of `a`; used by tests as the defining property of equivalence.
pub fn preserves_distances<C: Code + ?Sized>(w: &Witness, a: &C, budget: u128) -> Result<bool> {
    let words = a.words(budget)?;
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            let lhs = hamming_distance(u, v)?;
            let rhs = hamming_distance(&w.apply(u), &w.apply(v))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{GeneratorMatrix, LinearCode, DEFAULT_ENUM_BUDGET};
    use crate::corpus;

    fn f9() -> Field {
        Field::new(3, 2).unwrap()
    }
    fn f4() -> Field {
        Field::new(2, 2).unwrap()
    }

    fn small_code(f: &Field) -> LinearCode {
        let rows = vec![
            vec![f.one(), f.zero(), f.one(), f.one()],
            vec![f.zero(), f.one(), f.one(), f.e()],
        ];
        LinearCode::new(GeneratorMatrix::from_rows(f, rows).unwrap())
    }

    #[test]
    fn identity_witness_maps_a_code_to_itself() {
        let f = f4();
        let code = small_code(&f);
        let w = Witness::General(GeneralWitness::identity(&f, 4));
        assert!(is_equivalence(&w, &code, &code, DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn apply_conventions_are_explicit() {
        let f = f4();
        // alpha: position 0 -> 1, 1 -> 2, 2 -> 0
        let alpha = Perm::from_images(vec![1, 2, 0]).unwrap();
        let lambdas = vec![f.one(), f.e(), f.one()];
        let w = SemiLinearWitness::new(&f, alpha, lambdas, 1).unwrap();
        // u = (1, e, 0): after alpha the word is (0, 1, e);
        // then coordinate maps give (1*0^2, e*1^2, 1*e^2) = (0, e, e^2)
        let u = vec![f.one(), f.e(), f.zero()];
        let out = w.apply(&u);
        assert_eq!(out, vec![f.zero(), f.e(), f.mul(f.e(), f.e())]);
    }

    #[test]
    fn cubing_witness_sends_c1_to_the_cubed_code() {
        // semi-linear witness with t = 1, all lambdas 1, identity alpha:
        // the image of C1 is the code generated by G1 with entries cubed
        let c1 = corpus::c1().unwrap();
        let f = c1.field().clone();
        let w = SemiLinearWitness::new(&f, Perm::identity(8), vec![Fe::ONE; 8], 1).unwrap();
        let cubed = LinearCode::new(
            GeneratorMatrix::new(c1.generator().mat().frobenius(1)).unwrap(),
        );
        assert!(is_equivalence(
            &Witness::SemiLinear(w),
            &c1,
            &cubed,
            DEFAULT_ENUM_BUDGET
        )
        .unwrap());
    }

    #[test]
    fn valid_witnesses_preserve_distances() {
        let f = f4();
        let code = small_code(&f);
        let alpha = Perm::from_images(vec![3, 0, 2, 1]).unwrap();
        let w = SemiLinearWitness::new(&f, alpha, vec![f.e(), f.one(), f.e_pow(2), f.e()], 1)
            .unwrap();
        assert!(
            preserves_distances(&Witness::SemiLinear(w), &code, DEFAULT_ENUM_BUDGET).unwrap()
        );
    }

    #[test]
    fn translation_component_of_a_semilinear_witness_is_zero() {
        let f = f9();
        let w = SemiLinearWitness::new(&f, Perm::identity(3), vec![f.e(), f.one(), f.e_pow(5)], 1)
            .unwrap();
        let t = w.to_general().translation_component();
        assert!(t.word().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn translation_component_reads_back_the_composed_codeword() {
        let f = f4();
        let code = small_code(&f);
        let words = code.codewords(DEFAULT_ENUM_BUDGET).unwrap();
        let c = words[7].clone();
        let base = SemiLinearWitness::new(&f, Perm::identity(4), vec![f.e(); 4], 0)
            .unwrap()
            .to_general();
        let composed = base.with_translation(&c).unwrap();
        assert_eq!(composed.translation_component().word(), &c[..]);
        composed
            .translation_component()
            .verify_in(&code)
            .expect("codeword translation stays in the code");
        // and the composed witness is still a valid self-equivalence when
        // the base was one
        let scaled = plant_image(&code, &base);
        assert!(is_equivalence(
            &Witness::General(composed),
            &code,
            &scaled,
            DEFAULT_ENUM_BUDGET
        )
        .unwrap());
    }

    fn plant_image(code: &LinearCode, w: &GeneralWitness) -> LinearCode {
        // for monomial witnesses the image is generated by the mapped rows
        let rows: Vec<Vec<Fe>> = (0..code.k())
            .map(|r| w.apply(&code.generator().mat().row_vec(r)))
            .collect();
        LinearCode::new(GeneratorMatrix::from_rows(code.field(), rows).unwrap())
    }

    #[test]
    fn translation_off_the_code_fails_membership() {
        let f = f4();
        let code = small_code(&f);
        // (1, 0, 0, 0) has weight 1 < d = 3, so it is not a codeword
        let v = vec![f.one(), f.zero(), f.zero(), f.zero()];
        let base = GeneralWitness::identity(&f, 4);
        let w = base.with_translation(&v).unwrap();
        assert!(w.translation_component().verify_in(&code).is_err());
    }

    #[test]
    fn non_bijective_tables_are_rejected() {
        let f = f4();
        let table = vec![Fe::ZERO; 4];
        assert!(matches!(
            SymbolPerm::new(&f, table),
            Err(Error::NotBijective)
        ));
        assert!(SemiLinearWitness::new(&f, Perm::identity(2), vec![f.zero(), f.one()], 0).is_err());
        let zero_map = LinearizedMap::new(&f, vec![f.zero(), f.zero()]).unwrap();
        assert!(AdditiveWitness::new(&f, Perm::identity(1), vec![zero_map]).is_err());
    }

    #[test]
    fn image_set_mismatch_is_reported_as_false() {
        let f = f4();
        let code = small_code(&f);
        let other = LinearCode::new(
            GeneratorMatrix::from_rows(
                &f,
                vec![
                    vec![f.one(), f.zero(), f.one(), f.zero()],
                    vec![f.zero(), f.one(), f.one(), f.zero()],
                ],
            )
            .unwrap(),
        );
        let w = Witness::General(GeneralWitness::identity(&f, 4));
        assert!(!is_equivalence(&w, &code, &other, DEFAULT_ENUM_BUDGET).unwrap());
    }
}
