//! Metrics, complex structures and the invariant tensors they determine.

use crate::algebra::LieAlgebra;
use crate::error::{shape, Error, Result};
use crate::homogeneous::ReductivePair;
use crate::linalg::{unit_vec, zero_vec, Matrix, Vector};
use crate::scalar::Scalar;
use crate::tensor::{for_each_index, Symmetry, Tensor};

/// The tangent model on which invariant tensors live: a Lie algebra
/// (trivial isotropy) or the complement `m` of a reductive pair.
///
/// All data is expressed in coordinates of `m` (the whole algebra in the
/// group case).
#[derive(Clone, Debug)]
pub struct Carrier {
    names: Vec<String>,
    /// `[e_i, e_j]_m` as a `(1,2)` tensor.
    mbr: Tensor,
    /// `ad([e_i, e_j]_u)|_m`, indexed by `i * n + j`; empty for trivial isotropy.
    ubr: Vec<Matrix>,
    /// `ad(u_k)|_m` for the isotropy frame.
    isotropy: Vec<Matrix>,
    source: CarrierSource,
}

#[derive(Clone, Debug)]
pub enum CarrierSource {
    Algebra(LieAlgebra),
    Pair(ReductivePair),
}

impl Carrier {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let n = g.dim();
        let mbr = Tensor::from_fn(n, true, 2, |i| g.c(i[0], i[1], i[2]).clone());
        Carrier {
            names: g.names().to_vec(),
            mbr,
            ubr: Vec::new(),
            isotropy: Vec::new(),
            source: CarrierSource::Algebra(g.clone()),
        }
    }

    pub fn from_pair(p: &ReductivePair) -> Self {
        let n = p.dim_m();
        let mbr = Tensor::from_fn(n, true, 2, |i| p.bracket_m(i[1], i[2])[i[0]].clone());
        let isotropy: Vec<Matrix> = (0..p.dim_u()).map(|k| p.ad_u_on_m(k)).collect();
        let mut ubr = Vec::new();
        if !isotropy.is_empty() {
            for i in 0..n {
                for j in 0..n {
                    let cu = p.bracket_u(i, j);
                    let mut m = Matrix::zeros(n, n);
                    for (c, a) in cu.iter().zip(&isotropy) {
                        if !c.is_zero() {
                            m = m.add(&a.scale(c));
                        }
                    }
                    ubr.push(m);
                }
            }
        }
        Carrier { names: p.m_names().to_vec(), mbr, ubr, isotropy, source: CarrierSource::Pair(p.clone()) }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn source(&self) -> &CarrierSource {
        &self.source
    }

    pub fn has_isotropy(&self) -> bool {
        !self.isotropy.is_empty()
    }

    /// The Lie algebra when the isotropy is trivial.
    pub fn algebra(&self) -> Option<&LieAlgebra> {
        match &self.source {
            CarrierSource::Algebra(g) => Some(g),
            CarrierSource::Pair(_) => None,
        }
    }

    pub fn pair(&self) -> Option<&ReductivePair> {
        match &self.source {
            CarrierSource::Pair(p) => Some(p),
            CarrierSource::Algebra(_) => None,
        }
    }

    /// The `m`-projected bracket tensor.
    pub fn bracket_tensor(&self) -> &Tensor {
        &self.mbr
    }

    /// `[x, y]_m`.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.mbr.eval(&[x, y])
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        self.mbr.eval_basis(&[i, j])
    }

    /// `ad([e_i, e_j]_u)` restricted to `m`.
    pub fn bracket_u_endo(&self, i: usize, j: usize) -> Matrix {
        if self.ubr.is_empty() {
            Matrix::zeros(self.dim(), self.dim())
        } else {
            self.ubr[i * self.dim() + j].clone()
        }
    }

    /// `ad(u_k)|_m` for each isotropy frame vector.
    pub fn isotropy_action(&self) -> &[Matrix] {
        &self.isotropy
    }
}

/// A Hermitian structure `(g, J)` on a carrier.
#[derive(Clone, Debug)]
pub struct HermitianData {
    carrier: Carrier,
    g: Matrix,
    ginv: Matrix,
    j: Matrix,
    integrable: bool,
}

/// Result of [`analyze_hermitian`].
#[derive(Clone, Debug)]
pub struct HermitianAnalysis {
    pub orthogonal: bool,
    pub integrable: bool,
    pub nijenhuis: Tensor,
    pub abelian_j: bool,
}

fn check_metric_and_j(n: usize, g: &Matrix, j: &Matrix) -> Result<()> {
    if g.rows() != n || g.cols() != n || j.rows() != n || j.cols() != n {
        return Err(shape(format!("metric and J must be {n}x{n}")));
    }
    if !g.is_symmetric() {
        return Err(Error::InvalidHermitian("metric is not symmetric".into()));
    }
    if !g.is_positive_definite() {
        return Err(Error::InvalidHermitian("metric is not positive definite".into()));
    }
    if j.mul(j) != Matrix::identity(n).neg() {
        return Err(Error::InvalidHermitian("J^2 != -Id".into()));
    }
    if j.transpose().mul(g).mul(j) != *g {
        return Err(Error::InvalidHermitian("J is not g-orthogonal".into()));
    }
    Ok(())
}

impl HermitianData {
    /// Validates shapes, positivity, `J^2 = -1`, orthogonality and isotropy
    /// invariance.
    pub fn new(carrier: Carrier, g: Matrix, j: Matrix) -> Result<Self> {
        let n = carrier.dim();
        check_metric_and_j(n, &g, &j)?;
        for (k, a) in carrier.isotropy.iter().enumerate() {
            if !a.transpose().mul(&g).add(&g.mul(a)).is_zero() {
                return Err(Error::NotInvariant(format!("metric under isotropy generator {k}")));
            }
            if !a.commutator(&j).is_zero() {
                return Err(Error::NotInvariant(format!("J under isotropy generator {k}")));
            }
        }
        let ginv = g.inverse().expect("positive definite");
        let mut h = HermitianData { carrier, g, ginv, j, integrable: false };
        h.integrable = h.nijenhuis().is_zero();
        Ok(h)
    }

    pub fn on_algebra(g: &LieAlgebra, metric: Matrix, j: Matrix) -> Result<Self> {
        Self::new(Carrier::from_algebra(g), metric, j)
    }

    pub fn on_pair(p: &ReductivePair, metric: Matrix, j: Matrix) -> Result<Self> {
        Self::new(Carrier::from_pair(p), metric, j)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn ginv(&self) -> &Matrix {
        &self.ginv
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn integrable(&self) -> bool {
        self.integrable
    }

    pub fn metric_tensor(&self) -> Tensor {
        Tensor::from_bilinear(&self.g)
    }

    pub fn j_tensor(&self) -> Tensor {
        Tensor::from_endomorphism(&self.j)
    }

    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        self.g.bilinear(x, y)
    }

    /// `N(X,Y) = [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY]`.
    pub fn nijenhuis(&self) -> Tensor {
        let n = self.dim();
        let jc: Vec<Vector> = (0..n).map(|i| self.j.col(i)).collect();
        let mut t = Tensor::zeros(n, true, 2);
        for x in 0..n {
            for y in 0..n {
                let ex = unit_vec(n, x);
                let ey = unit_vec(n, y);
                let a = self.carrier.bracket(&jc[x], &jc[y]);
                let b = self.carrier.bracket_basis(x, y);
                let c = self.j.mul_vec(&self.carrier.bracket(&jc[x], &ey));
                let d = self.j.mul_vec(&self.carrier.bracket(&ex, &jc[y]));
                for k in 0..n {
                    t.set(&[k, x, y], &a[k] - &b[k] - &c[k] - &d[k]);
                }
            }
        }
        t
    }

    /// Error carrying the Nijenhuis witness when `J` is not integrable.
    pub fn require_integrable(&self) -> Result<()> {
        if self.integrable {
            return Ok(());
        }
        let n = self.nijenhuis();
        let (idx, v) = n.first_nonzero().expect("nonzero Nijenhuis tensor");
        let names = self.carrier.names();
        Err(Error::NotIntegrable {
            component: format!("N({}, {})[{}] = {}", names[idx[1]], names[idx[2]], names[idx[0]], v),
            nijenhuis: Box::new(n),
            torsion: Some(Box::new(bismut_torsion_form(self))),
        })
    }
}

/// Orthogonality, integrability, the Nijenhuis tensor and abelianity of `J`.
pub fn analyze_hermitian(h: &HermitianData) -> Result<HermitianAnalysis> {
    check_metric_and_j(h.dim(), &h.g, &h.j)?;
    let nijenhuis = h.nijenhuis();
    let n = h.dim();
    let mut abelian_j = true;
    'outer: for x in 0..n {
        for y in 0..n {
            if h.carrier.bracket(&h.j.col(x), &h.j.col(y)) != h.carrier.bracket_basis(x, y) {
                abelian_j = false;
                break 'outer;
            }
        }
    }
    Ok(HermitianAnalysis { orthogonal: true, integrable: nijenhuis.is_zero(), nijenhuis, abelian_j })
}

/// `ω(X,Y) = g(JX,Y)`.
pub fn fundamental_form(h: &HermitianData) -> Tensor {
    let w = h.j.transpose().mul(&h.g);
    Tensor::from_bilinear(&w).with_symmetry(Symmetry::Alternating).expect("ω is alternating for orthogonal J")
}

/// Chevalley–Eilenberg differential of an alternating `(0,k)` form, using
/// the `m`-projected bracket.
pub fn ce_differential(alpha: &Tensor, carrier: &Carrier) -> Result<Tensor> {
    let n = carrier.dim();
    if alpha.is_upper() || alpha.dim() != n {
        return Err(shape("CE differential needs a (0,k) form on the carrier"));
    }
    if !alpha.is_alternating() {
        return Err(shape("CE differential needs an alternating form"));
    }
    let k = alpha.lower();
    if k == 0 {
        return Ok(Tensor::zeros(n, false, 1));
    }
    let mbr = carrier.bracket_tensor();
    let mut out = Tensor::zeros(n, false, k + 1);
    let mut rest = vec![0usize; k];
    for_each_index(n, k + 1, |x| {
        let mut acc = Scalar::zero();
        for i in 0..=k {
            for j in i + 1..=k {
                let b = mbr.eval_basis(&[x[i], x[j]]);
                if b.iter().all(Scalar::is_zero) {
                    continue;
                }
                let mut p = 1;
                for (q, &xq) in x.iter().enumerate() {
                    if q != i && q != j {
                        rest[p] = xq;
                        p += 1;
                    }
                }
                let mut s = Scalar::zero();
                for (c, bc) in b.iter().enumerate() {
                    if !bc.is_zero() {
                        rest[0] = c;
                        let a = alpha.get(&rest);
                        if !a.is_zero() {
                            s += bc * a;
                        }
                    }
                }
                if (i + j) % 2 == 1 {
                    acc -= s;
                } else {
                    acc += s;
                }
            }
        }
        out.set(x, acc);
    });
    Ok(out.with_symmetry(Symmetry::Alternating).expect("dα is alternating"))
}

/// The Bismut torsion 3-form `T(X,Y,Z) = dω(JX,JY,JZ)`; meaningful for
/// integrable `J` but computable for any.
pub fn bismut_torsion_form(h: &HermitianData) -> Tensor {
    let dw = ce_differential(&fundamental_form(h), h.carrier()).expect("ω is an alternating 2-form");
    let n = h.dim();
    let jc: Vec<Vector> = (0..n).map(|i| h.j.col(i)).collect();
    Tensor::from_fn(n, false, 3, |i| dw.eval_scalar(&[&jc[i[0]], &jc[i[1]], &jc[i[2]]]))
}

/// Coordinates helper: `J e_i`.
pub fn j_columns(h: &HermitianData) -> Vec<Vector> {
    (0..h.dim()).map(|i| h.j.col(i)).collect()
}

/// Zero vector in carrier coordinates.
pub fn zero_in(h: &HermitianData) -> Vector {
    zero_vec(h.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    pub(crate) fn kodaira() -> HermitianData {
        let g = LieAlgebra::from_int_brackets(&["z", "w", "e", "Je"], &[(2, 3, &[(0, 1)])]).unwrap();
        let j = Matrix::from_ints(4, 4, &[0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0]);
        HermitianData::on_algebra(&g, Matrix::identity(4), j).unwrap()
    }

    fn std_j(n: usize) -> Matrix {
        let mut j = Matrix::zeros(n, n);
        for k in 0..n / 2 {
            j[(2 * k + 1, 2 * k)] = qi(1);
            j[(2 * k, 2 * k + 1)] = qi(-1);
        }
        j
    }

    #[test]
    fn abelian_standard() {
        let h = HermitianData::on_algebra(&LieAlgebra::abelian(&["a", "b", "c", "d"]), Matrix::identity(4), std_j(4)).unwrap();
        let a = analyze_hermitian(&h).unwrap();
        assert!(a.integrable && a.abelian_j && a.nijenhuis.is_zero());
    }

    #[test]
    fn kodaira_structure() {
        let h = kodaira();
        let a = analyze_hermitian(&h).unwrap();
        assert!(a.integrable);
        assert!(a.abelian_j);
        let w = fundamental_form(&h);
        assert_eq!(w.get(&[2, 3]), &qi(1));
        assert_eq!(w.get(&[0, 1]), &qi(1));
        assert_eq!(w.nonzero_count(), 4);
        let dw = ce_differential(&w, h.carrier()).unwrap();
        assert_eq!(dw.get(&[2, 3, 1]), &qi(-1));
        for (idx, _) in dw.nonzero_entries() {
            let mut s = idx.clone();
            s.sort();
            assert_eq!(s, vec![1, 2, 3]);
        }
    }

    #[test]
    fn invalid_structures() {
        let g = LieAlgebra::abelian(&["a", "b"]);
        let bad_j = Matrix::from_ints(2, 2, &[0, -2, 1, 0]);
        assert!(matches!(HermitianData::on_algebra(&g, Matrix::identity(2), bad_j), Err(Error::InvalidHermitian(_))));
        // J^2 = -1 but not orthogonal for the identity metric
        let skewed = Matrix::from_fn(2, 2, |i, j| [[qi(1), qi(-2)], [qi(1), qi(-1)]][i][j].clone());
        assert!(matches!(HermitianData::on_algebra(&g, Matrix::identity(2), skewed), Err(Error::InvalidHermitian(_))));
        let neg = Matrix::from_ints(2, 2, &[1, 0, 0, -1]);
        assert!(HermitianData::on_algebra(&g, neg, std_j(2)).is_err());
        let _ = q(1, 2);
    }

    #[test]
    fn abelian_carrier_has_closed_forms() {
        let c = Carrier::from_algebra(&LieAlgebra::abelian(&["a", "b", "c"]));
        let a = Tensor::from_fn(3, false, 2, |i| qi(i[0] as i64 - i[1] as i64));
        assert!(ce_differential(&a, &c).unwrap().is_zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn h3() -> Carrier {
            Carrier::from_algebra(&LieAlgebra::from_int_brackets(&["x", "y", "z"], &[(0, 1, &[(2, 1)])]).unwrap())
        }

        fn random_carrier() -> impl Strategy<Value = Carrier> {
            crate::algebra::tests_support::random_algebra().prop_map(|g| Carrier::from_algebra(&g))
        }

        proptest! {
            #[test]
            fn d_squared_vanishes_on_one_forms(b in proptest::collection::vec(-5i64..6, 3)) {
                let c = h3();
                let beta = Tensor::from_covector(&b.iter().map(|&x| qi(x)).collect::<Vec<_>>());
                let db = ce_differential(&beta, &c).unwrap();
                prop_assert!(ce_differential(&db, &c).unwrap().is_zero());
            }

            #[test]
            fn d_squared_vanishes_on_two_forms(c in random_carrier(), v in proptest::collection::vec(-3i64..4, 64)) {
                let n = c.dim();
                let a = Tensor::from_fn(n, false, 2, |i| {
                    let (x, y) = (i[0], i[1]);
                    if x == y { qi(0) } else if x < y { qi(v[(x * n + y) % 64]) } else { -qi(v[(y * n + x) % 64]) }
                });
                let da = ce_differential(&a, &c).unwrap();
                prop_assert!(ce_differential(&da, &c).unwrap().is_zero());
            }
        }
    }
}
