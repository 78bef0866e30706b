//! Witnesses of natural reductivity: an enlarged transitive algebra `ĝ`,
//! isotropy `ĥ`, a complement `m = m₁ + m₂` and an ad-invariant form `Q̂`
//! with `Q̂(ĥ, m) = 0`, `Q̂|m = g` and `Q̂|ĥ` nondegenerate.

use crate::algebra::{direct_sum, LieAlgebra};
use crate::error::{inconsistent, shape, Error, Result};
use crate::homogeneous::{natred_test, verify_kostant, KostantForm, ReductivePair};
use crate::linalg::{linear_solve, unit_vec, Matrix, Subspace, Vector};
use crate::scalar::{q, Scalar};

/// A complex semisimple algebra given by its realification `s`, the frame
/// of a compact real form `k ⊂ s` and multiplication by `i`.
#[derive(Clone, Debug)]
pub struct ComplexSemisimpleData {
    pub s: LieAlgebra,
    pub k: Vec<Vector>,
    pub j: Matrix,
}

/// A torus bundle `G̃/H` over a flag manifold (compact case) or a Hermitian
/// symmetric space (noncompact case). `h`, `t`, `b` are frames in `algebra`
/// (`t` includes any extra torus factor). `q` is the ad-invariant form on
/// `algebra` with `q|b = g|b`; `metric` and `j` act on `t + b` in the
/// coordinates of the `t` frame followed by the `b` frame.
#[derive(Clone, Debug)]
pub struct TorusWitnessData {
    pub algebra: LieAlgebra,
    pub h: Vec<Vector>,
    pub t: Vec<Vector>,
    pub b: Vec<Vector>,
    pub q: Matrix,
    pub metric: Matrix,
    pub j: Matrix,
}

#[derive(Clone, Debug)]
pub enum WitnessInput {
    ComplexSemisimple(ComplexSemisimpleData),
    CompactTorusBundle(TorusWitnessData),
    NoncompactTorusBundle(TorusWitnessData),
}

#[derive(Clone, Debug)]
pub struct NatredWitness {
    pub pair: ReductivePair,
    /// `Q̂` in the basis of the enlarged algebra.
    pub q_hat: Matrix,
    /// The metric and complex structure transported to `m`.
    pub g: Matrix,
    pub j: Matrix,
    pub dim_m1: usize,
}

pub fn natred_witness(input: &WitnessInput) -> Result<NatredWitness> {
    match input {
        WitnessInput::ComplexSemisimple(d) => complex_semisimple(d),
        WitnessInput::CompactTorusBundle(d) => torus(d, true),
        WitnessInput::NoncompactTorusBundle(d) => torus(d, false),
    }
}

fn concat(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().chain(b).cloned().collect()
}

fn scaled(v: &[Scalar], s: &Scalar) -> Vector {
    v.iter().map(|x| x * s).collect()
}

fn coords_in(frame: &[Vector], v: &[Scalar]) -> Result<Vector> {
    let n = v.len();
    linear_solve(&Matrix::from_cols(n, frame), v)?
        .particular
        .ok_or_else(|| shape("vector is not in the span of the frame"))
}

fn check_invariant(l: &LieAlgebra, q: &Matrix) -> Result<()> {
    for x in 0..l.dim() {
        let ad = l.ad_basis(x);
        if !ad.transpose().mul(q).add(&q.mul(&ad)).is_zero() {
            return Err(Error::NotInvariant(format!("form is not invariant under ad({})", l.name(x))));
        }
    }
    Ok(())
}

/// Assembles the pair and runs every assertion of the witness.
fn assemble(l: LieAlgebra, h: Vec<Vector>, m: Vec<Vector>, names: Vec<String>, q_hat: Matrix, g: Matrix, j: Matrix, dim_m1: usize) -> Result<NatredWitness> {
    if !q_hat.is_symmetric() {
        return Err(inconsistent("witness form is not symmetric"));
    }
    check_invariant(&l, &q_hat).map_err(|e| inconsistent(format!("witness form: {e}")))?;
    let gram_h = Matrix::from_fn(h.len(), h.len(), |a, b| q_hat.bilinear(&h[a], &h[b]));
    if !h.is_empty() && gram_h.determinant().is_zero() {
        return Err(Error::WitnessFailure("the form is degenerate on the enlarged isotropy".into()));
    }
    let pair = ReductivePair::new_allowing_kernel(l, h.clone(), m.clone(), names)?;
    let mut frame = h;
    frame.extend(m);
    let p = Matrix::from_cols(pair.l().dim(), &frame);
    let form = KostantForm { q: q_hat.clone(), q_frame: p.transpose().mul(&q_hat).mul(&p) };
    verify_kostant(&pair, &g, &form).map_err(|e| Error::WitnessFailure(e.to_string()))?;
    if !natred_test(&pair, &g)?.all_pass() {
        return Err(inconsistent("witness pair is not naturally reductive"));
    }
    Ok(NatredWitness { pair, q_hat, g, j, dim_m1 })
}

fn complex_semisimple(d: &ComplexSemisimpleData) -> Result<NatredWitness> {
    let n = d.s.dim();
    let r = d.k.len();
    if 2 * r != n || d.j.rows() != n {
        return Err(shape("compact form must have half the real dimension"));
    }
    let ik: Vec<Vector> = d.k.iter().map(|u| d.j.mul_vec(u)).collect();
    let mut full = d.k.clone();
    full.extend(ik.iter().cloned());
    if Subspace::span(n, &full).dim() != n {
        return Err(shape("k and ik do not span the realification"));
    }
    // k as an abstract algebra in the given frame
    let mut kc = vec![Scalar::zero(); r * r * r];
    for a in 0..r {
        for b in 0..r {
            let c = coords_in(&d.k, &d.s.bracket(&d.k[a], &d.k[b]))
                .map_err(|_| Error::NotASubalgebra("compact form".into()))?;
            for (i, x) in c.into_iter().enumerate() {
                kc[i * r * r + a * r + b] = x;
            }
        }
    }
    let kalg = LieAlgebra::new(LieAlgebra::numbered("k", r), kc)?;
    let mut names: Vec<String> = d.s.names().to_vec();
    names.extend(LieAlgebra::numbered("k", r));
    let l = direct_sum(&d.s, &kalg).with_names(names)?;

    let bk = d.s.killing();
    let bk_k = Matrix::from_fn(r, r, |a, b| bk.bilinear(&d.k[a], &d.k[b]));
    let q_hat = Matrix::block_diag(&[&bk, &bk_k.scale(&q(-1, 2))]);

    let zero_k = vec![Scalar::zero(); r];
    let two = Scalar::from_int(2);
    let h: Vec<Vector> = (0..r).map(|a| concat(&d.k[a], &unit_vec(r, a))).collect();
    let m1: Vec<Vector> = (0..r).map(|a| concat(&d.k[a], &scaled(&unit_vec(r, a), &two))).collect();
    let m2: Vec<Vector> = (0..r).map(|a| concat(&ik[a], &zero_k)).collect();
    let mut m = m1;
    m.extend(m2);
    let mut mnames: Vec<String> = (1..=r).map(|a| format!("m1_{a}")).collect();
    mnames.extend((1..=r).map(|a| format!("m2_{a}")));

    // canonical metric: -B on k, B on ik; J sends the m1 copy of U to the m2 copy of iU
    let g = Matrix::block_diag(&[&bk_k.neg(), &Matrix::from_fn(r, r, |a, b| bk.bilinear(&ik[a], &ik[b]))]);
    let mut j = Matrix::zeros(2 * r, 2 * r);
    for a in 0..r {
        j[(r + a, a)] = Scalar::one();
        j[(a, r + a)] = Scalar::from_int(-1);
    }
    assemble(l, h, m, mnames, q_hat, g, j, r)
}

fn torus(d: &TorusWitnessData, compact: bool) -> Result<NatredWitness> {
    let n = d.algebra.dim();
    let (kh, kt, kb) = (d.h.len(), d.t.len(), d.b.len());
    if kh + kt + kb != n || d.metric.rows() != kt + kb || d.j.rows() != kt + kb || d.q.rows() != n {
        return Err(shape("torus bundle data has inconsistent sizes"));
    }
    check_invariant(&d.algebra, &d.q)?;
    for a in 0..kb {
        for b in 0..kb {
            if d.q.bilinear(&d.b[a], &d.b[b]) != d.metric[(kt + a, kt + b)] {
                return Err(Error::WitnessFailure("the invariant form does not restrict to g on b".into()));
            }
        }
        for u in 0..kt {
            if !d.metric[(u, kt + a)].is_zero() {
                return Err(Error::UnsupportedHypothesis("metric pairs the torus with b".into()));
            }
        }
    }
    let qt = Matrix::from_fn(kt, kt, |a, b| d.q.bilinear(&d.t[a], &d.t[b]));
    let gt = Matrix::from_fn(kt, kt, |a, b| d.metric[(a, b)].clone());
    let qt_inv = qt.inverse().ok_or_else(|| Error::WitnessFailure("invariant form is degenerate on the torus".into()))?;
    // g(U,V) = ±Q(SU,V)
    let s = if compact { qt_inv.mul(&gt) } else { qt_inv.mul(&gt).neg() };
    let id = Matrix::identity(kt);

    // t-coordinates of the enlarged directions and the remaining torus part
    let (f, rest): (Vec<Vector>, Vec<Vector>) = if compact {
        let t1 = Subspace::span(kt, &s.sub(&id).kernel());
        let perp = t1.orthogonal_in(&qt, &Subspace::full(kt));
        (perp.basis().to_vec(), t1.basis().to_vec())
    } else {
        ((0..kt).map(|a| unit_vec(kt, a)).collect(), Vec::new())
    };
    let nf = f.len();
    // the shift is S - Id (compact) or S + Id (noncompact) on span f
    let shift = if compact { s.sub(&id) } else { s.add(&id) };
    let shift_f = Matrix::from_cols(nf, &f.iter().map(|v| coords_in(&f, &shift.mul_vec(v))).collect::<Result<Vec<_>>>()?);
    let shift_f_inv = shift_f.inverse().ok_or_else(|| inconsistent("shift is singular on the enlarged torus"))?;
    let qf = Matrix::from_fn(nf, nf, |a, b| qt.bilinear(&f[a], &f[b]));
    let sign = if compact { Scalar::one() } else { Scalar::from_int(-1) };
    // Q̂ on the extra summand: ±Q(shift⁻¹ U1, U2) in f coordinates
    let extra = shift_f_inv.transpose().mul(&qf).scale(&sign);

    let t_amb = |c: &[Scalar]| {
        let mut v = vec![Scalar::zero(); n];
        for (x, t) in c.iter().zip(&d.t) {
            crate::linalg::axpy(&mut v, x, t);
        }
        v
    };
    let zeros = vec![Scalar::zero(); nf];
    let mut names: Vec<String> = d.algebra.names().to_vec();
    names.extend(LieAlgebra::numbered("w", nf));
    let l = direct_sum(&d.algebra, &LieAlgebra::new(LieAlgebra::numbered("w", nf), vec![Scalar::zero(); nf * nf * nf])?)
        .with_names(names)?;
    let q_hat = Matrix::block_diag(&[&d.q, &extra]);

    let mut h: Vec<Vector> = d.h.iter().map(|x| concat(x, &zeros)).collect();
    h.extend((0..nf).map(|a| concat(&t_amb(&f[a]), &unit_vec(nf, a))));
    // m1 = {(U, ∓shift U)} with U in span f; in f coordinates shift U is a column of shift_f
    let m1_sign = if compact { Scalar::from_int(-1) } else { Scalar::one() };
    let mut m: Vec<Vector> = (0..nf).map(|a| concat(&t_amb(&f[a]), &scaled(&shift_f.col(a), &m1_sign))).collect();
    m.extend(rest.iter().map(|c| concat(&t_amb(c), &zeros)));
    m.extend(d.b.iter().map(|x| concat(x, &zeros)));
    let mut mnames: Vec<String> = (1..=nf).map(|a| format!("f{a}")).collect();
    mnames.extend((1..=rest.len()).map(|a| format!("s{a}")));
    mnames.extend((1..=kb).map(|a| format!("b{a}")));

    // transport g and J from t + b (t frame then b frame) to the m frame
    let mut cols: Vec<Vector> = f.iter().chain(rest.iter()).map(|c| concat(c, &vec![Scalar::zero(); kb])).collect();
    cols.extend((0..kb).map(|a| concat(&vec![Scalar::zero(); kt], &unit_vec(kb, a))));
    let p = Matrix::from_cols(kt + kb, &cols);
    let pinv = p.inverse().ok_or_else(|| inconsistent("complement frame is not a basis"))?;
    let g = p.transpose().mul(&d.metric).mul(&p);
    let j = pinv.mul(&d.j).mul(&p);
    assemble(l, h, m, mnames, q_hat, g, j, nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::verdict_suite;
    use crate::constructions::catalog::{calabi_eckmann_witness_data, sl2c_witness_data, sl2r_torus_witness_data};
    use crate::hermitian::HermitianData;
    use crate::scalar::qi;

    fn bas_on_pair(w: &NatredWitness) -> bool {
        let h = HermitianData::on_pair(&w.pair, w.g.clone(), w.j.clone()).unwrap();
        verdict_suite(&h).unwrap().passes("bas")
    }

    #[test]
    fn complex_semisimple_witness() {
        let w = natred_witness(&WitnessInput::ComplexSemisimple(sl2c_witness_data())).unwrap();
        assert_eq!(w.pair.dim_u(), 3);
        assert_eq!(w.pair.dim_m(), 6);
        assert!(natred_test(&w.pair, &w.g).unwrap().all_pass());
        assert!(w.pair.trivial_submodule().is_zero());
        assert!(bas_on_pair(&w));
    }

    #[test]
    fn calabi_eckmann_witnesses() {
        // S = Id: nothing is added
        let w = natred_witness(&WitnessInput::CompactTorusBundle(calabi_eckmann_witness_data(&qi(1), &qi(0), &qi(1)).unwrap())).unwrap();
        assert_eq!(w.dim_m1, 0);
        assert_eq!(w.pair.dim_u(), 0);
        // S = diag(1, 4): eigenvalue 1 on one direction only
        let w = natred_witness(&WitnessInput::CompactTorusBundle(calabi_eckmann_witness_data(&qi(1), &qi(0), &qi(4)).unwrap())).unwrap();
        assert_eq!(w.dim_m1, 1);
        assert!(bas_on_pair(&w));
        // no eigenvalue 1
        let w = natred_witness(&WitnessInput::CompactTorusBundle(calabi_eckmann_witness_data(&qi(2), &qi(1), &qi(1)).unwrap())).unwrap();
        assert_eq!(w.dim_m1, 2);
        assert!(natred_test(&w.pair, &w.g).unwrap().all_pass());
    }

    #[test]
    fn noncompact_witness() {
        let w = natred_witness(&WitnessInput::NoncompactTorusBundle(sl2r_torus_witness_data())).unwrap();
        assert_eq!(w.dim_m1, 2);
        assert!(bas_on_pair(&w));
    }

    #[test]
    fn form_must_restrict_to_the_metric() {
        let mut d = calabi_eckmann_witness_data(&qi(1), &qi(0), &qi(1)).unwrap();
        for a in 2..6 {
            d.metric[(a, a)] = qi(2);
        }
        assert!(matches!(natred_witness(&WitnessInput::CompactTorusBundle(d)), Err(Error::WitnessFailure(_))));
    }
}
