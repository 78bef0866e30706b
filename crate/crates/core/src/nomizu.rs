//! The Nomizu algebra of a BAS structure and its canonical presentation.
//!
//! Given Hermitian data on a Lie algebra whose Bismut connection has
//! parallel torsion and curvature, the stabilizer
//! `N0 = {A : A·g = A·J = A·T = A·R = 0}` and the tangent space assemble into
//! a Lie algebra `N = N0 ⊕ m` with
//! `[(A,v),(B,w)] = ([A,B] + R(v,w), Av - Bw + T(v,w))`.
//!
//! The canonical presentation `l = [m,m] + m ⊆ N` is returned with the
//! opposite bracket `[x,y]_l = -[x,y]_N`. With that choice the canonical
//! connection of `l = u + m` has torsion `-[X,Y]_m` and curvature
//! `[[X,Y]_u, ·]`, matching the Bismut data exactly.

use crate::algebra::LieAlgebra;
use crate::connections::{covariant_derivative, BismutGeometry};
use crate::error::{inconsistent, Error, Result};
use crate::hermitian::HermitianData;
use crate::homogeneous::{natred_test, ReductivePair};
use crate::linalg::{unit_vec, zero_vec, Matrix, RowSpace, Subspace, Vector};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::verdict::Check;

/// Kernel of `A ↦ (A·g, A·J, A·T, A·R)`, as a list of endomorphisms.
///
/// Requires the input to be BAS.
pub fn stabilizer(geo: &BismutGeometry) -> Result<Vec<Matrix>> {
    let h = &geo.h;
    if h.carrier().has_isotropy() {
        return Err(Error::UnsupportedHypothesis("the Nomizu construction expects trivial isotropy".into()));
    }
    let verdict = geo.verdict()?;
    if !verdict.passes("bas") {
        return Err(Error::NotBas("Bismut torsion or curvature is not parallel".into()));
    }
    let n = h.dim();
    let nn = n * n;
    let unit = |k: usize| {
        let mut m = Matrix::zeros(n, n);
        m[(k / n, k % n)] = Scalar::one();
        m
    };
    // Stage 1: the unitary algebra u(g, J), solved entrywise.
    let mut rs = RowSpace::new(nn);
    let g_t = h.metric_tensor();
    let j_t = h.j_tensor();
    let images: Vec<(Tensor, Tensor)> = (0..nn).map(|k| (g_t.gl_action(&unit(k)), j_t.gl_action(&unit(k)))).collect();
    for comp in 0..g_t.data().len() {
        rs.insert(images.iter().map(|(a, _)| a.data()[comp].clone()).collect());
    }
    for comp in 0..j_t.data().len() {
        rs.insert(images.iter().map(|(_, b)| b.data()[comp].clone()).collect());
    }
    let unitary: Vec<Matrix> = rs.kernel().iter().map(|v| Matrix::from_flat(n, n, v)).collect();
    // Stage 2: impose A·T = A·R = 0 on combinations of the unitary basis.
    let k = unitary.len();
    let mut rs2 = RowSpace::new(k);
    for tau in [geo.t(), &geo.r] {
        let acts: Vec<Tensor> = unitary.iter().map(|b| tau.gl_action(b)).collect();
        for comp in 0..tau.data().len() {
            let row: Vector = acts.iter().map(|a| a.data()[comp].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rs2.insert(row);
            }
        }
    }
    let basis: Vec<Matrix> = rs2
        .kernel()
        .iter()
        .map(|c| {
            let mut m = Matrix::zeros(n, n);
            for (ci, b) in c.iter().zip(&unitary) {
                if !ci.is_zero() {
                    m = m.add(&b.scale(ci));
                }
            }
            m
        })
        .collect();
    let space = endo_space(n, &basis);
    for a in &basis {
        for b in &basis {
            if !space.contains(&a.commutator(b).flatten()) {
                return Err(inconsistent("stabilizer is not closed under commutators"));
            }
        }
    }
    Ok(basis)
}

fn endo_space(n: usize, basis: &[Matrix]) -> Subspace {
    Subspace::from_frame(n * n, basis.iter().map(Matrix::flatten).collect()).expect("kernel basis is independent")
}

/// `N0 ⊕ m` with its structure constants; basis `A1..As` then the carrier basis.
#[derive(Clone, Debug)]
pub struct NomizuAlgebra {
    pub stab: Vec<Matrix>,
    pub geometry: BismutGeometry,
    pub algebra: LieAlgebra,
}

impl NomizuAlgebra {
    pub fn dim_stab(&self) -> usize {
        self.stab.len()
    }

    pub fn dim_m(&self) -> usize {
        self.geometry.dim()
    }

    /// Splits an element of `N` into `(A, v)`.
    pub fn split(&self, x: &[Scalar]) -> (Matrix, Vector) {
        let (s, n) = (self.dim_stab(), self.dim_m());
        let mut a = Matrix::zeros(n, n);
        for (c, b) in x[..s].iter().zip(&self.stab) {
            if !c.is_zero() {
                a = a.add(&b.scale(c));
            }
        }
        (a, x[s..].to_vec())
    }

    /// The element `(A, v)` of `N`; `A` must lie in the stabilizer.
    pub fn join(&self, a: &Matrix, v: &[Scalar]) -> Result<Vector> {
        let n = self.dim_m();
        let mut out = endo_space(n, &self.stab)
            .coords(&a.flatten())
            .ok_or_else(|| inconsistent("endomorphism is not in the stabilizer"))?;
        if self.stab.is_empty() {
            out.clear();
        }
        out.extend_from_slice(v);
        Ok(out)
    }
}

pub fn build_nomizu(h: &HermitianData) -> Result<NomizuAlgebra> {
    let geo = BismutGeometry::new(h)?;
    build_nomizu_from(geo)
}

pub fn build_nomizu_from(geo: BismutGeometry) -> Result<NomizuAlgebra> {
    let stab = stabilizer(&geo)?;
    let n = geo.dim();
    let s = stab.len();
    let d = s + n;
    let space = endo_space(n, &stab);
    let coords = |m: &Matrix| -> Result<Vector> {
        if s == 0 {
            return if m.is_zero() { Ok(Vec::new()) } else { Err(inconsistent("curvature outside the stabilizer")) };
        }
        space.coords(&m.flatten()).ok_or_else(|| inconsistent("bracket leaves the stabilizer"))
    };
    let mut c = vec![Scalar::zero(); d * d * d];
    let mut put = |i: usize, j: usize, v: &[Scalar]| {
        for (k, x) in v.iter().enumerate() {
            c[k * d * d + i * d + j] = x.clone();
            c[k * d * d + j * d + i] = -x;
        }
    };
    for a in 0..s {
        for b in a + 1..s {
            let mut v = coords(&stab[a].commutator(&stab[b]))?;
            v.extend(zero_vec(n));
            put(a, b, &v);
        }
        for w in 0..n {
            let mut v = zero_vec(s);
            v.extend(stab[a].col(w));
            put(a, s + w, &v);
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let mut v = coords(&geo.r.endomorphism_at(x, y))?;
            v.extend(geo.t().eval_basis(&[x, y]));
            put(s + x, s + y, &v);
        }
    }
    let mut names: Vec<String> = (1..=s).map(|i| format!("A{i}")).collect();
    names.extend(geo.h.carrier().names().iter().cloned());
    if names.iter().collect::<std::collections::BTreeSet<_>>().len() != d {
        names = LieAlgebra::numbered("x", d);
    }
    let algebra = LieAlgebra::new(names, c).map_err(|e| inconsistent(format!("Nomizu bracket: {e}")))?;
    Ok(NomizuAlgebra { stab, geometry: geo, algebra })
}

/// The canonical presentation with its transported structure.
#[derive(Clone, Debug)]
pub struct CanonicalPresentation {
    pub pair: ReductivePair,
    pub g: Matrix,
    pub j: Matrix,
    /// Each `u` frame vector as an endomorphism of `m` (its stabilizer part).
    pub u_endomorphisms: Vec<Matrix>,
    pub nomizu: NomizuAlgebra,
}

/// Structure constants of the subalgebra spanned by `frame`.
fn restrict(alg: &LieAlgebra, frame: &[Vector], names: Vec<String>) -> Result<LieAlgebra> {
    let d = alg.dim();
    let k = frame.len();
    let sub = Subspace::from_frame(d, frame.to_vec())?;
    let mut c = vec![Scalar::zero(); k * k * k];
    for i in 0..k {
        for j in 0..k {
            let b = alg.bracket(&frame[i], &frame[j]);
            let co = sub.coords(&b).ok_or_else(|| inconsistent("l = [m,m] + m is not a subalgebra"))?;
            for (t, v) in co.into_iter().enumerate() {
                c[t * k * k + i * k + j] = v;
            }
        }
    }
    LieAlgebra::new(names, c)
}

pub fn canonical_presentation(h: &HermitianData) -> Result<CanonicalPresentation> {
    presentation_of(build_nomizu(h)?)
}

pub fn presentation_of(nomizu: NomizuAlgebra) -> Result<CanonicalPresentation> {
    let (s, n) = (nomizu.dim_stab(), nomizu.dim_m());
    let d = s + n;
    let neg = LieAlgebra::new_unchecked(
        nomizu.algebra.names().to_vec(),
        nomizu.algebra.constants().iter().map(|x| -x).collect(),
    );
    let m_vecs: Vec<Vector> = (s..d).map(|i| unit_vec(d, i)).collect();
    let mut span = RowSpace::new(d);
    for v in &m_vecs {
        span.insert(v.clone());
    }
    for x in &m_vecs {
        for y in &m_vecs {
            span.insert(neg.bracket(x, y));
        }
    }
    let l_sub = Subspace::span(d, &span.basis());
    let stab_sub = Subspace::span(d, &(0..s).map(|i| unit_vec(d, i)).collect::<Vec<_>>());
    let u_sub = l_sub.intersection(&stab_sub);
    let k = u_sub.dim();
    let mut frame = u_sub.basis().to_vec();
    frame.extend(m_vecs.iter().cloned());
    let m_names = nomizu.geometry.h.carrier().names().to_vec();
    let mut names: Vec<String> = (1..=k).map(|i| format!("u{i}")).collect();
    names.extend(m_names.iter().cloned());
    if names.iter().collect::<std::collections::BTreeSet<_>>().len() != k + n {
        names = LieAlgebra::numbered("x", k + n);
    }
    let l = restrict(&neg, &frame, names).map_err(|e| inconsistent(format!("canonical presentation: {e}")))?;
    let dl = k + n;
    let pair = ReductivePair::new(
        l,
        (0..k).map(|i| unit_vec(dl, i)).collect(),
        (k..dl).map(|i| unit_vec(dl, i)).collect(),
        m_names,
    )
    .map_err(|e| inconsistent(format!("canonical presentation: {e}")))?;
    let h = &nomizu.geometry.h;
    let (g, j) = (h.g().clone(), h.j().clone());
    if !natred_test(&pair, &g)?.passes("naturally_reductive") {
        return Err(inconsistent("canonical presentation is not naturally reductive"));
    }
    let u_endomorphisms = u_sub.basis().iter().map(|x| nomizu.split(x).0).collect();
    Ok(CanonicalPresentation { pair, g, j, u_endomorphisms, nomizu })
}

/// `φ(A, v) = (A + 1/2 v⌟T, v)`.
pub fn generator_map(nom: &NomizuAlgebra, a: &Matrix, v: &[Scalar]) -> (Matrix, Vector) {
    let tv = nom.geometry.t_at(v).scale(&Scalar::frac(1, 2));
    (a.add(&tv), v.to_vec())
}

/// Bracket on holomorphic Killing generators:
/// `[(Ã,v),(B̃,w)] = ([Ã,B̃] + Rm(v,w), Ãw - B̃v)`.
pub fn generator_bracket(nom: &NomizuAlgebra, x: &(Matrix, Vector), y: &(Matrix, Vector)) -> (Matrix, Vector) {
    let rm = &nom.geometry.rm;
    let n = nom.dim_m();
    let mut rvw = Matrix::zeros(n, n);
    for (a, va) in x.1.iter().enumerate() {
        if va.is_zero() {
            continue;
        }
        for (b, wb) in y.1.iter().enumerate() {
            if !wb.is_zero() {
                rvw = rvw.add(&rm.endomorphism_at(a, b).scale(&(va * wb)));
            }
        }
    }
    let first = x.0.commutator(&y.0).add(&rvw);
    let second: Vector = x.0.mul_vec(&y.1).iter().zip(y.0.mul_vec(&x.1)).map(|(p, q)| p - &q).collect();
    (first, second)
}

/// Exhaustive check that `φ` preserves brackets on basis pairs of `N`.
pub fn verify_generator_map(nom: &NomizuAlgebra) -> Result<()> {
    let d = nom.algebra.dim();
    let phi = |x: &[Scalar]| {
        let (a, v) = nom.split(x);
        generator_map(nom, &a, &v)
    };
    for i in 0..d {
        for j in i + 1..d {
            let lhs = phi(&nom.algebra.bracket_basis(i, j));
            let rhs = generator_bracket(nom, &phi(&unit_vec(d, i)), &phi(&unit_vec(d, j)));
            if lhs != rhs {
                return Err(inconsistent(format!("generator map does not preserve [{}, {}]", nom.algebra.name(i), nom.algebra.name(j))));
            }
        }
    }
    Ok(())
}

/// Order-0 and order-1 generator conditions for `(Ã, v)`:
/// `v⌟D^{k+1}τ + Ã·D^kτ = 0` for `τ ∈ {J, Rm}` and `k ∈ {0, 1}`.
pub fn generator_conditions(nom: &NomizuAlgebra, a_tilde: &Matrix, v: &[Scalar]) -> Check {
    let geo = &nom.geometry;
    let lc = &geo.bismut.lc;
    let mut parts = Vec::new();
    for tau in [geo.h.j_tensor(), geo.rm.clone()] {
        let d1 = covariant_derivative(lc, &tau);
        let d2 = covariant_derivative(lc, &d1);
        for (lower, upper) in [(&tau, &d1), (&d1, &d2)] {
            let contracted = contract_direction(upper, v);
            parts.push(Check::vanishing(contracted.add(&lower.gl_action(a_tilde))));
        }
    }
    Check::all(parts)
}

/// `v ⌟ τ` on the first lower slot.
fn contract_direction(tau: &Tensor, v: &[Scalar]) -> Tensor {
    let n = tau.dim();
    let upper = tau.is_upper();
    let off = upper as usize;
    let mut out = Tensor::zeros(n, upper, tau.lower() - 1);
    for (idx, t) in tau.nonzero_entries() {
        let c = &v[idx[off]];
        if c.is_zero() {
            continue;
        }
        let mut j: Vec<usize> = idx[..off].to_vec();
        j.extend_from_slice(&idx[off + 1..]);
        out.add_at(&j, &(c * t));
    }
    out
}
