//! Products of nilpotent, compact and noncompact torus bundle factors with
//! a complex structure that may mix their distinguished directions.

use crate::algebra::{direct_sum, LieAlgebra};
use crate::connections::verdict_suite;
use crate::error::{inconsistent, shape, Error, Result};
use crate::hermitian::{Carrier, CarrierSource, HermitianData};
use crate::homogeneous::ReductivePair;
use crate::linalg::{unit_vec, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

use super::knil::{build_k_nilpotent, KNilpotentSpec};

/// One factor: a carrier with metric, a distinguished subspace `f` (centre
/// or torus) and a transverse complex structure on `f⊥`, stored as an
/// endomorphism that vanishes on `f`.
#[derive(Clone, Debug)]
pub struct ProductFactor {
    pub carrier: Carrier,
    pub g: Matrix,
    pub distinguished: Vec<Vector>,
    pub transverse: Matrix,
}

/// `g`-orthogonal projection onto the complement of `f`.
fn complement_projection(g: &Matrix, f: &[Vector]) -> Matrix {
    let n = g.rows();
    if f.is_empty() {
        return Matrix::identity(n);
    }
    let fm = Matrix::from_cols(n, f);
    let gram = fm.transpose().mul(g).mul(&fm);
    let p_f = fm.mul(&gram.inverse().expect("metric is definite")).mul(&fm.transpose()).mul(g);
    Matrix::identity(n).sub(&p_f)
}

impl ProductFactor {
    pub fn new(carrier: Carrier, g: Matrix, distinguished: Vec<Vector>, transverse: Matrix) -> Result<Self> {
        let n = carrier.dim();
        if g.rows() != n || g.cols() != n || transverse.rows() != n || transverse.cols() != n {
            return Err(shape("factor metric or transverse structure has the wrong size"));
        }
        if distinguished.iter().any(|v| v.len() != n) || Subspace::span(n, &distinguished).dim() != distinguished.len() {
            return Err(shape("distinguished directions must be independent vectors of the factor"));
        }
        let p = complement_projection(&g, &distinguished);
        let bad = |m: &str| Err(Error::InvalidHermitian(format!("transverse structure {m}")));
        if !transverse.mul(&p).sub(&transverse).is_zero() {
            return bad("does not vanish on the distinguished directions");
        }
        if !p.mul(&transverse).sub(&transverse).is_zero() {
            return bad("leaves the complement");
        }
        if !transverse.mul(&transverse).add(&p).is_zero() {
            return bad("does not square to -1 on the complement");
        }
        if transverse.transpose().mul(&g).mul(&transverse) != p.transpose().mul(&g).mul(&p) {
            return bad("is not orthogonal");
        }
        Ok(ProductFactor { carrier, g, distinguished, transverse })
    }

    /// A Hermitian factor whose `J` preserves the distinguished subspace.
    pub fn from_hermitian(h: &HermitianData, distinguished: Vec<Vector>) -> Result<Self> {
        let n = h.dim();
        let f = Subspace::span(n, &distinguished);
        if distinguished.iter().any(|v| !f.contains(&h.j().mul_vec(v))) {
            return Err(Error::Admissibility("factor J does not preserve its distinguished subspace".into()));
        }
        let p = complement_projection(h.g(), &distinguished);
        Self::new(h.carrier().clone(), h.g().clone(), distinguished, h.j().mul(&p))
    }

    /// A `𝔨`-nilpotent factor; the distinguished subspace is the centre.
    pub fn from_k_nilpotent(spec: &KNilpotentSpec) -> Result<Self> {
        let built = build_k_nilpotent(spec)?;
        let k = spec.k_dim;
        let transverse = built.complex_structure(&Matrix::zeros(k, k));
        let (centre, _) = built.decomposition(spec);
        Self::new(Carrier::from_algebra(&built.algebra), built.g, centre, transverse)
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }
}

fn as_pair(c: &Carrier) -> ReductivePair {
    match c.source() {
        CarrierSource::Algebra(l) => ReductivePair::trivial(l),
        CarrierSource::Pair(p) => p.clone(),
    }
}

fn product_carrier(factors: &[ProductFactor]) -> Result<Carrier> {
    let suffix = |name: &str, i: usize| if factors.len() == 1 { name.to_string() } else { format!("{name}_{}", i + 1) };
    if factors.iter().all(|f| !f.carrier.has_isotropy()) {
        let mut l: Option<LieAlgebra> = None;
        let mut names = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            let a = f.carrier.algebra().cloned().unwrap_or_else(|| as_pair(&f.carrier).frame_algebra());
            names.extend(a.names().iter().map(|s| suffix(s, i)));
            l = Some(match l {
                None => a,
                Some(prev) => direct_sum(&prev, &a),
            });
        }
        let l = l.ok_or_else(|| shape("a product needs at least one factor"))?.with_names(names)?;
        return Ok(Carrier::from_algebra(&l));
    }
    let pairs: Vec<ReductivePair> = factors.iter().map(|f| as_pair(&f.carrier)).collect();
    let total: usize = pairs.iter().map(|p| p.l().dim()).sum();
    let mut l: Option<LieAlgebra> = None;
    let (mut u, mut m, mut names) = (Vec::new(), Vec::new(), Vec::new());
    let mut offset = 0;
    let embed = |v: Vector, offset: usize| -> Vector {
        let mut w = vec![Scalar::zero(); total];
        for (a, x) in v.into_iter().enumerate() {
            w[offset + a] = x;
        }
        w
    };
    for (i, p) in pairs.iter().enumerate() {
        u.extend(p.u().basis().iter().map(|v| embed(v.clone(), offset)));
        m.extend((0..p.dim_m()).map(|a| embed(p.m_vec(&unit_vec(p.dim_m(), a)), offset)));
        names.extend(p.m_names().iter().map(|s| suffix(s, i)));
        offset += p.l().dim();
        l = Some(match l {
            None => p.l().clone(),
            Some(prev) => direct_sum(&prev, p.l()),
        });
    }
    let l = l.expect("nonempty");
    let lnames = (0..l.dim()).map(|a| format!("l{}", a + 1)).collect();
    let pair = ReductivePair::new_allowing_kernel(l.with_names(lnames)?, u, m, names)?;
    Ok(Carrier::from_pair(&pair))
}

/// Assembles the product and checks that `J` preserves the sum of the
/// distinguished subspaces and agrees with each transverse structure on
/// its complement. The result is asserted to be BAS.
pub fn product_bas(factors: &[ProductFactor], j: &Matrix) -> Result<HermitianData> {
    let carrier = product_carrier(factors)?;
    let n = carrier.dim();
    if j.rows() != n || j.cols() != n {
        return Err(shape("complex structure has the wrong size for the product"));
    }
    let gs: Vec<&Matrix> = factors.iter().map(|f| &f.g).collect();
    let ts: Vec<&Matrix> = factors.iter().map(|f| &f.transverse).collect();
    let g = Matrix::block_diag(&gs);
    let transverse = Matrix::block_diag(&ts);
    let mut dist = Vec::new();
    let mut offset = 0;
    for f in factors {
        for v in &f.distinguished {
            let mut w = vec![Scalar::zero(); n];
            w[offset..offset + f.dim()].clone_from_slice(v);
            dist.push(w);
        }
        offset += f.dim();
    }
    let fsub = Subspace::span(n, &dist);
    if dist.iter().any(|v| !fsub.contains(&j.mul_vec(v))) {
        return Err(Error::Admissibility("J does not preserve the distinguished subspace".into()));
    }
    let p = complement_projection(&g, &dist);
    if j.mul(&p) != transverse {
        return Err(Error::Admissibility("J does not restrict to the factor transverse structures".into()));
    }
    let h = HermitianData::new(carrier, g, j.clone())?;
    if !verdict_suite(&h)?.passes("bas") {
        return Err(inconsistent("admissible product is not BAS"));
    }
    Ok(h)
}
