//! Deterministic random generators for codes and witnesses, used to plant
//! roundtrip instances: build a code, disguise it with a known witness, and
//! check that extraction or search recovers a valid witness.

use rand::Rng;

use crate::additive::AdditiveCode;
use crate::code::{GeneratorMatrix, LinearCode};
use crate::error::Error;
use crate::field::{Fe, Field, LinearizedMap};
use crate::mat::{Mat, Perm};
use crate::witness::{AdditiveWitness, SemiLinearWitness};
use crate::Result;

const MAX_TRIES: usize = 100_000;

pub fn random_element<R: Rng>(rng: &mut R, field: &Field) -> Fe {
    Fe(rng.gen_range(0..field.q()) as u32)
}

pub fn random_nonzero<R: Rng>(rng: &mut R, field: &Field) -> Fe {
    Fe(rng.gen_range(1..field.q()) as u32)
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    Perm::from_images(images).expect("shuffle is a bijection")
}

/// A full-rank `k x n` generator matrix, by rejection sampling.
pub fn random_generator<R: Rng>(
    rng: &mut R,
    field: &Field,
    k: usize,
    n: usize,
) -> Result<GeneratorMatrix> {
    for _ in 0..MAX_TRIES {
        let rows: Vec<Vec<Fe>> = (0..k)
            .map(|_| (0..n).map(|_| random_element(rng, field)).collect())
            .collect();
        if let Ok(g) = GeneratorMatrix::from_rows(field, rows) {
            return Ok(g);
        }
    }
    Err(Error::BadShape("could not sample a full-rank matrix".into()))
}

/// A random linear MDS code, by rejection on the minimum distance.
pub fn random_linear_mds<R: Rng>(
    rng: &mut R,
    field: &Field,
    k: usize,
    n: usize,
    budget: u128,
) -> Result<LinearCode> {
    for _ in 0..MAX_TRIES {
        let g = random_generator(rng, field, k, n)?;
        let code = LinearCode::new(g);
        if code.is_mds(budget)? {
            return Ok(code);
        }
    }
    Err(Error::BadShape(format!(
        "no MDS [{n},{k}] code found over F_{}",
        field.q()
    )))
}

pub fn random_semilinear_witness<R: Rng>(
    rng: &mut R,
    field: &Field,
    n: usize,
) -> SemiLinearWitness {
    let alpha = random_perm(rng, n);
    let lambdas = (0..n).map(|_| random_nonzero(rng, field)).collect();
    let t = rng.gen_range(0..field.h());
    SemiLinearWitness::new(field, alpha, lambdas, t).expect("components are valid")
}

pub fn random_invertible_linmap<R: Rng>(rng: &mut R, field: &Field) -> LinearizedMap {
    let fp = field.prime_field();
    let h = field.h();
    loop {
        let mut m = Mat::zero(&fp, h, h);
        for r in 0..h {
            for c in 0..h {
                m.set(r, c, random_element(rng, &fp));
            }
        }
        if m.rank() == h {
            return LinearizedMap::from_matrix(field, &m).expect("shape h x h");
        }
    }
}

pub fn random_additive_witness<R: Rng>(rng: &mut R, field: &Field, n: usize) -> AdditiveWitness {
    let alpha = random_perm(rng, n);
    let maps = (0..n).map(|_| random_invertible_linmap(rng, field)).collect();
    AdditiveWitness::new(field, alpha, maps).expect("maps are invertible")
}

/// Image of a linear code under a semi-linear witness, as a linear code:
/// the mapped generator rows span the image.
pub fn semilinear_image(code: &LinearCode, w: &SemiLinearWitness) -> LinearCode {
    let rows: Vec<Vec<Fe>> = (0..code.k())
        .map(|r| w.apply(&code.generator().mat().row_vec(r)))
        .collect();
    LinearCode::new(GeneratorMatrix::from_rows(code.field(), rows).expect("image has equal rank"))
}

/// Image of an additive code under an additive witness: additive witnesses
/// are `F_p`-linear, so the mapped generator rows span the image.
pub fn additive_image(code: &AdditiveCode, w: &AdditiveWitness) -> AdditiveCode {
    let rows: Vec<Vec<Fe>> = (0..code.generators().rows())
        .map(|r| w.apply(&code.generators().row_vec(r)))
        .collect();
    AdditiveCode::from_rows(code.field(), rows).expect("image has the same shape")
}

/// A random codeword of a linear code.
pub fn random_codeword<R: Rng>(rng: &mut R, code: &LinearCode) -> Vec<Fe> {
    let msg: Vec<Fe> = (0..code.k())
        .map(|_| random_element(rng, code.field()))
        .collect();
    code.generator().mat().row_mul(&msg)
}

/// A random word of an additive code.
pub fn random_additive_codeword<R: Rng>(rng: &mut R, code: &AdditiveCode) -> Vec<Fe> {
    let f = code.field();
    let fp = f.prime_field();
    let gens = code.generators();
    let mut acc = vec![Fe::ZERO; code.n()];
    for r in 0..gens.rows() {
        let s = random_element(rng, &fp);
        if s.is_zero() {
            continue;
        }
        let sf = f.from_prime(s.index() as u64);
        for (a, &x) in acc.iter_mut().zip(gens.row(r)) {
            *a = f.add(*a, f.mul(sf, x));
        }
    }
    acc
}

/// A random additive MDS code: a linear MDS code viewed additively, then
/// disguised by a random additive witness (equivalence preserves distances,
/// so the result is still additive MDS).
pub fn random_additive_mds<R: Rng>(
    rng: &mut R,
    field: &Field,
    k: usize,
    n: usize,
    budget: u128,
) -> Result<AdditiveCode> {
    let lin = random_linear_mds(rng, field, k, n, budget)?;
    let base = AdditiveCode::from_linear(&lin);
    let w = random_additive_witness(rng, field, n);
    Ok(additive_image(&base, &w))
}

/// A random repetition-pattern generator: a surjection `f` from coordinates
/// onto rows and nonzero column scalars. Every column has weight one.
pub fn random_repetition_pattern<R: Rng>(
    rng: &mut R,
    field: &Field,
    k: usize,
    n: usize,
) -> Result<(GeneratorMatrix, Vec<usize>)> {
    if n < k {
        return Err(Error::BadShape("need n >= k".into()));
    }
    // surjective f: each row gets one coordinate, the rest are random
    let mut f_map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let spots = random_perm(rng, n);
    for j in 0..k {
        f_map[spots.image(j)] = j;
    }
    let mut mat = Mat::zero(field, k, n);
    for (r, &fr) in f_map.iter().enumerate() {
        mat.set(fr, r, random_nonzero(rng, field));
    }
    Ok((GeneratorMatrix::new(mat)?, f_map))
}

/// A uniformly random bijection of the field.
pub fn random_symbol_table<R: Rng>(rng: &mut R, field: &Field) -> Vec<Fe> {
    let mut table: Vec<Fe> = field.elements().collect();
    for i in (1..table.len()).rev() {
        table.swap(i, rng.gen_range(0..=i));
    }
    table
}
