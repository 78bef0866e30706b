//! Deciding whether a nilpotent Lie algebra carries a left-invariant BAS
//! structure, by bringing it to the unitary normal form
//! `[e_j, Je_j] ∈ 𝔷(𝔫)`, all other brackets zero.
//!
//! The decision is exact. On a complement `V` of the centre the bracket is a
//! pencil of 2-forms `ω_i`; after picking a nondegenerate combination `ω_c`,
//! the operators `A_i = ω_c⁻¹ ω_i` must commute and be diagonalizable over
//! the reals. A yes answer is only returned together with a basis whose
//! recomputed brackets have the normal form.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::LieAlgebra;
use crate::hermitian::HermitianData;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::poly::{real_semisimple_test, Polynomial};
use crate::scalar::Scalar;
use crate::error::{Error, Result};

/// Random pencil samples tried after the deterministic candidates.
pub const PENCIL_SAMPLES: usize = 32;
const PENCIL_SEED: u64 = 0x6261_735f_6e69_6c00;
const PENCIL_RANGE: i64 = 1_000_000;
/// Bracket entries of a floating-point witness may deviate this much.
pub const NUMERIC_BRACKET_TOL: f64 = 1e-9;
const NUMERIC_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilVerdict {
    Yes,
    No,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    NotNilpotent,
    NotTwoStep { class: usize },
    OddCentre { dim: usize },
    OddComplement { dim: usize },
    /// No sampled combination of the pencil was nondegenerate. The answer is
    /// probabilistic: a nondegenerate combination exists for every normal
    /// form, and the degenerate ones form a finite union of hyperplanes.
    DegeneratePencil { samples: usize },
    NonCommuting { i: usize, j: usize },
    NotRealSemisimple { index: usize, min_poly: Polynomial },
}

/// The adapted basis, exact or floating point. Columns are the basis
/// vectors in the coordinates of the input algebra: `z1..z2k` spanning the
/// centre, then `e1, Je1, e2, Je2, ...`.
#[derive(Clone, Debug)]
pub enum WitnessBasis {
    Exact(Matrix),
    Numeric(Vec<Vec<f64>>),
}

#[derive(Clone, Debug)]
pub struct NormalFormWitness {
    pub basis: WitnessBasis,
    pub centre_dim: usize,
    pub pairs: usize,
    /// `[e_j, Je_j]` in the `z` basis; floating point for numeric witnesses.
    pub coefficients: Vec<Vec<f64>>,
    /// Exact coefficients when the basis is exact.
    pub exact_coefficients: Option<Vec<Vector>>,
    /// Largest deviation from the normal form observed when re-verifying.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct NilDecision {
    pub verdict: NilVerdict,
    pub witness: Option<NormalFormWitness>,
    pub obstruction: Option<Obstruction>,
    pub probabilistic: bool,
    pub note: Option<String>,
}

impl NilDecision {
    fn no(o: Obstruction) -> Self {
        let probabilistic = matches!(o, Obstruction::DegeneratePencil { .. });
        NilDecision { verdict: NilVerdict::No, witness: None, obstruction: Some(o), probabilistic, note: None }
    }

    fn yes(w: NormalFormWitness) -> Self {
        NilDecision { verdict: NilVerdict::Yes, witness: Some(w), obstruction: None, probabilistic: false, note: None }
    }

    fn indeterminate(note: impl Into<String>) -> Self {
        NilDecision { verdict: NilVerdict::Indeterminate, witness: None, obstruction: None, probabilistic: false, note: Some(note.into()) }
    }
}

impl NormalFormWitness {
    pub fn is_exact(&self) -> bool {
        matches!(self.basis, WitnessBasis::Exact(_))
    }

    /// The standard structure `J z_{2i-1} = z_{2i}`, `J e_j = Je_j`, with
    /// the witness basis orthonormal.
    pub fn standard_j(&self) -> Matrix {
        let n = self.centre_dim + 2 * self.pairs;
        let mut j = Matrix::zeros(n, n);
        for a in (0..n).step_by(2) {
            j[(a + 1, a)] = Scalar::one();
            j[(a, a + 1)] = Scalar::from_int(-1);
        }
        j
    }

    /// The standard structure expressed in the basis of `n`: `J = P J₀ P⁻¹`
    /// and `g = P⁻ᵀ P⁻¹`. Only exact witnesses qualify.
    pub fn standard_structure(&self, n: &LieAlgebra) -> Result<HermitianData> {
        let WitnessBasis::Exact(p) = &self.basis else {
            return Err(Error::UnsupportedHypothesis("the witness basis is only known numerically".into()));
        };
        let pinv = p.inverse().expect("witness basis is invertible");
        let j = p.mul(&self.standard_j()).mul(&pinv);
        let g = pinv.transpose().mul(&pinv);
        HermitianData::on_algebra(n, g, j)
    }

    /// The algebra rewritten in the witness basis, with the standard
    /// structure (identity metric).
    pub fn standard_structure_in_witness_basis(&self, n: &LieAlgebra) -> Result<HermitianData> {
        let WitnessBasis::Exact(p) = &self.basis else {
            return Err(Error::UnsupportedHypothesis("the witness basis is only known numerically".into()));
        };
        let mut names = LieAlgebra::numbered("z", self.centre_dim);
        for j in 1..=self.pairs {
            names.push(format!("e{j}"));
            names.push(format!("Je{j}"));
        }
        let w = n.change_basis(p, names)?;
        HermitianData::on_algebra(&w, Matrix::identity(n.dim()), self.standard_j())
    }
}

/// Exact re-verification of the normal form for an exact basis.
pub fn verify_exact_witness(n: &LieAlgebra, p: &Matrix, centre_dim: usize) -> Option<Vec<Vector>> {
    let d = n.dim();
    let w = n.change_basis(p, LieAlgebra::numbered("x", d)).ok()?;
    let pairs = (d - centre_dim) / 2;
    let mut coeffs = Vec::with_capacity(pairs);
    for i in 0..d {
        for j in 0..d {
            let br = w.bracket_basis(i, j);
            let paired = i >= centre_dim && j >= centre_dim && (i - centre_dim) / 2 == (j - centre_dim) / 2 && i != j;
            if paired {
                if br[centre_dim..].iter().any(|x| !x.is_zero()) {
                    return None;
                }
            } else if br.iter().any(|x| !x.is_zero()) {
                return None;
            }
        }
    }
    for j in 0..pairs {
        let a = centre_dim + 2 * j;
        let c = w.bracket_basis(a, a + 1)[..centre_dim].to_vec();
        if c.iter().all(Scalar::is_zero) {
            return None;
        }
        coeffs.push(c);
    }
    Some(coeffs)
}

pub fn decide_nilpotent_bas(n: &LieAlgebra) -> NilDecision {
    let d = n.dim();
    let class = match n.nilpotency_class() {
        None => return NilDecision::no(Obstruction::NotNilpotent),
        Some(c) => c,
    };
    if class > 2 {
        return NilDecision::no(Obstruction::NotTwoStep { class });
    }
    let z = n.centre();
    if z.dim() % 2 == 1 {
        return NilDecision::no(Obstruction::OddCentre { dim: z.dim() });
    }
    let v = z.coordinate_complement();
    let m = v.dim();
    if m % 2 == 1 {
        return NilDecision::no(Obstruction::OddComplement { dim: m });
    }
    let k = z.dim();
    let zb = z.basis().to_vec();
    let vb = v.basis().to_vec();
    if m == 0 {
        let p = Matrix::from_cols(d, &zb);
        return NilDecision::yes(NormalFormWitness {
            basis: WitnessBasis::Exact(p),
            centre_dim: k,
            pairs: 0,
            coefficients: Vec::new(),
            exact_coefficients: Some(Vec::new()),
            residual: 0.0,
        });
    }

    // ω_i(a, b) = z_i-coordinate of [v_a, v_b]
    let zf = Matrix::from_cols(d, &zb);
    let zsp = Subspace::span(d, &zb);
    let mut omegas = vec![Matrix::zeros(m, m); k];
    for a in 0..m {
        for b in 0..m {
            let br = n.bracket(&vb[a], &vb[b]);
            let c = crate::linalg::linear_solve(&zf, &br)
                .ok()
                .and_then(|s| s.particular)
                .expect("2-step: brackets lie in the centre");
            debug_assert!(zsp.contains(&br));
            for (i, x) in c.into_iter().enumerate() {
                omegas[i][(a, b)] = x;
            }
        }
    }

    let Some((omega_c, samples)) = nondegenerate_combination(&omegas, m) else {
        return NilDecision::no(Obstruction::DegeneratePencil { samples: k + 1 + PENCIL_SAMPLES });
    };
    let _ = samples;
    let wc_inv = omega_c.inverse().expect("nondegenerate");
    let ops: Vec<Matrix> = omegas.iter().map(|w| wc_inv.mul(w)).collect();
    for i in 0..k {
        for j in i + 1..k {
            if !ops[i].commutator(&ops[j]).is_zero() {
                return NilDecision::no(Obstruction::NonCommuting { i, j });
            }
        }
    }
    let mut rational = true;
    let mut roots = Vec::with_capacity(k);
    for (index, a) in ops.iter().enumerate() {
        let rep = real_semisimple_test(a).expect("square");
        if !rep.semisimple {
            return NilDecision::no(Obstruction::NotRealSemisimple { index, min_poly: rep.min_poly });
        }
        let r = rep.min_poly.rational_roots();
        rational &= Some(r.len()) == rep.min_poly.degree();
        roots.push(r);
    }

    let to_n = |x: &[Scalar]| {
        let mut out = vec![Scalar::zero(); d];
        for (c, b) in x.iter().zip(&vb) {
            crate::linalg::axpy(&mut out, c, b);
        }
        out
    };

    if rational {
        let blocks = joint_eigenspaces(&ops, &roots, m);
        let mut cols = zb.clone();
        for block in blocks {
            let Some(pairs) = symplectic_basis(block, &omega_c) else {
                return NilDecision::indeterminate("symplectic splitting of a joint eigenspace failed");
            };
            for (x, y) in pairs {
                cols.push(to_n(&x));
                cols.push(to_n(&y));
            }
        }
        let p = Matrix::from_cols(d, &cols);
        return match verify_exact_witness(n, &p, k) {
            Some(c) => NilDecision::yes(NormalFormWitness {
                basis: WitnessBasis::Exact(p),
                centre_dim: k,
                pairs: m / 2,
                coefficients: c.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect(),
                exact_coefficients: Some(c),
                residual: 0.0,
            }),
            None => NilDecision::indeterminate("exact witness failed re-verification"),
        };
    }

    match numeric_witness(n, &zb, &vb, &ops, &omega_c) {
        Some(w) => NilDecision::yes(w),
        None => NilDecision::indeterminate("floating-point witness did not meet the tolerance"),
    }
}

/// Unit vectors, then all ones, then seeded random integer vectors.
fn nondegenerate_combination(omegas: &[Matrix], m: usize) -> Option<(Matrix, Vec<Scalar>)> {
    let k = omegas.len();
    let mut candidates: Vec<Vec<Scalar>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    candidates.push(vec![Scalar::one(); k]);
    let mut rng = ChaCha8Rng::seed_from_u64(PENCIL_SEED);
    for _ in 0..PENCIL_SAMPLES {
        candidates.push((0..k).map(|_| Scalar::from_int(rng.gen_range(-PENCIL_RANGE..=PENCIL_RANGE))).collect());
    }
    for c in candidates {
        let mut w = Matrix::zeros(m, m);
        for (x, om) in c.iter().zip(omegas) {
            if !x.is_zero() {
                w = w.add(&om.scale(x));
            }
        }
        if !w.determinant().is_zero() {
            return Some((w, c));
        }
    }
    None
}

/// Splits `ℚ^m` into joint eigenspaces of commuting operators with rational
/// spectra. Each block is returned as a frame.
fn joint_eigenspaces(ops: &[Matrix], roots: &[Vec<Scalar>], m: usize) -> Vec<Vec<Vector>> {
    let mut blocks: Vec<Vec<Vector>> = vec![(0..m).map(|i| crate::linalg::unit_vec(m, i)).collect()];
    for (a, rs) in ops.iter().zip(roots) {
        let mut next = Vec::new();
        for block in &blocks {
            let bm = Matrix::from_cols(m, block);
            for r in rs {
                let shifted = a.sub(&Matrix::identity(m).scale(r)).mul(&bm);
                let ker = shifted.kernel();
                if !ker.is_empty() {
                    next.push(ker.iter().map(|c| bm.mul_vec(c)).collect());
                }
            }
        }
        blocks = next;
    }
    blocks
}

/// Symplectic Gram-Schmidt: pairs `(x, y)` with `ω(x, y) = 1`, mutually
/// `ω`-orthogonal.
fn symplectic_basis(mut rest: Vec<Vector>, w: &Matrix) -> Option<Vec<(Vector, Vector)>> {
    let mut out = Vec::new();
    while !rest.is_empty() {
        let x = rest.remove(0);
        let pos = rest.iter().position(|y| !w.bilinear(&x, y).is_zero())?;
        let y0 = rest.remove(pos);
        let s = w.bilinear(&x, &y0).recip();
        let y: Vector = y0.iter().map(|c| c * &s).collect();
        for u in rest.iter_mut() {
            let a = w.bilinear(u, &y);
            let b = w.bilinear(u, &x);
            for i in 0..u.len() {
                let delta = &(&b * &y[i]) - &(&a * &x[i]);
                u[i] += delta;
            }
        }
        out.push((x, y));
    }
    Some(out)
}

fn to_dm(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64())
}

/// Floating-point construction for irrational joint spectra.
fn numeric_witness(n: &LieAlgebra, zb: &[Vector], vb: &[Vector], ops: &[Matrix], omega_c: &Matrix) -> Option<NormalFormWitness> {
    let d = n.dim();
    let (k, m) = (zb.len(), vb.len());
    let fops: Vec<DMatrix<f64>> = ops.iter().map(to_dm).collect();
    let w = to_dm(omega_c);

    // a generic combination separates the joint eigenspaces
    let mut rng = ChaCha8Rng::seed_from_u64(PENCIL_SEED ^ 1);
    let mut best: Option<(DMatrix<f64>, Vec<f64>)> = None;
    for _ in 0..8 {
        let mut comb = DMatrix::<f64>::zeros(m, m);
        for a in &fops {
            comb += a * (rng.gen_range(1..=97) as f64);
        }
        let eig = comb.complex_eigenvalues();
        let scale = 1.0 + eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut vals: Vec<f64> = eig.iter().map(|z| z.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut clusters: Vec<f64> = Vec::new();
        for v in vals {
            if clusters.last().is_none_or(|c| (v - c).abs() > 1e-7 * scale) {
                clusters.push(v);
            }
        }
        if best.as_ref().is_none_or(|(_, c)| clusters.len() > c.len()) {
            best = Some((comb, clusters));
        }
    }
    let (comb, clusters) = best?;
    let scale = 1.0 + comb.norm();
    let mut blocks: Vec<Vec<nalgebra::DVector<f64>>> = Vec::new();
    for mu in clusters {
        let shifted = &comb - DMatrix::<f64>::identity(m, m) * mu;
        let svd = shifted.clone().svd(true, true);
        let vt = svd.v_t?;
        let mut frame = Vec::new();
        for (i, s) in svd.singular_values.iter().enumerate() {
            if *s < 1e-8 * scale {
                let v = vt.row(i).transpose();
                if (&shifted * &v).norm() > NUMERIC_RESIDUAL_TOL.max(1e-10) * scale {
                    return None;
                }
                frame.push(v);
            }
        }
        blocks.push(frame);
    }
    if blocks.iter().map(Vec::len).sum::<usize>() != m {
        return None;
    }

    let om = |x: &nalgebra::DVector<f64>, y: &nalgebra::DVector<f64>| (x.transpose() * &w * y)[(0, 0)];
    let vmat = DMatrix::from_fn(d, m, |i, j| vb[j][i].to_f64());
    let mut cols: Vec<nalgebra::DVector<f64>> = zb.iter().map(|z| nalgebra::DVector::from_iterator(d, z.iter().map(Scalar::to_f64))).collect();
    for mut rest in blocks {
        while !rest.is_empty() {
            let x = rest.remove(0);
            let (pos, _) = rest
                .iter()
                .enumerate()
                .map(|(i, y)| (i, om(&x, y).abs()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
            let y0 = rest.remove(pos);
            let s = om(&x, &y0);
            if s.abs() < 1e-10 {
                return None;
            }
            let y = y0 / s;
            for u in rest.iter_mut() {
                let a = om(u, &y);
                let b = om(u, &x);
                *u += &y * b - &x * a;
            }
            cols.push(&vmat * &x);
            cols.push(&vmat * &y);
        }
    }
    let p = DMatrix::from_columns(&cols);
    let pinv = p.clone().try_inverse()?;
    let fb = |x: &nalgebra::DVector<f64>, y: &nalgebra::DVector<f64>| {
        let mut out = nalgebra::DVector::<f64>::zeros(d);
        for kk in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let c = n.c(kk, i, j);
                    if !c.is_zero() {
                        out[kk] += c.to_f64() * x[i] * y[j];
                    }
                }
            }
        }
        out
    };
    let mut residual: f64 = 0.0;
    let mut coefficients = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let br = &pinv * fb(&cols[i], &cols[j]);
            let paired = i >= k && j >= k && (i - k) / 2 == (j - k) / 2 && i != j;
            let off = if paired { k } else { 0 };
            for kk in off..d {
                residual = residual.max(br[kk].abs());
            }
            if paired && i < j {
                coefficients.push(br.rows(0, k).iter().copied().collect::<Vec<f64>>());
            }
        }
    }
    if residual > NUMERIC_BRACKET_TOL {
        return None;
    }
    let basis = (0..d).map(|i| (0..d).map(|j| p[(i, j)]).collect()).collect();
    Some(NormalFormWitness {
        basis: WitnessBasis::Numeric(basis),
        centre_dim: k,
        pairs: m / 2,
        coefficients,
        exact_coefficients: None,
        residual,
    })
}
