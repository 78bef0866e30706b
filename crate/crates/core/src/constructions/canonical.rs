//! Canonical Ambrose–Singer connections with skew torsion on torus bundles
//! over flag or Hermitian symmetric bases and on 𝔨-nilpotent groups.
//!
//! Both connections are `Λ = Λ^LC + ½T`. On a torus bundle the only
//! components of the torsion 3-form are `T(U,X,Y) = −g([X,Y]_𝔱, U)` for
//! fibre directions `U` and horizontal `X, Y` (left-invariant bracket
//! convention). On a 𝔨-nilpotent group
//! `T(X,Y,Z) = −g([X,Y],Z) − g([Y,Z],X) − g([Z,X],Y)`.

use crate::connections::{covariant_derivative, curvature_of, levi_civita_of, ConnectionMap};
use crate::error::{inconsistent, shape, Error, Result};
use crate::hermitian::Carrier;
use crate::homogeneous::ReductivePair;
use crate::linalg::{unit_vec, Matrix, Vector};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

use super::knil::{build_k_nilpotent, KNilpotentSpec};

/// A homogeneous torus bundle `l/u` whose `m` frame lists the fibre
/// directions `𝔱` first (`t_dim` of them) and the horizontal space `𝔟`
/// after. `i` is the transverse complex structure on `𝔟`.
#[derive(Clone, Copy, Debug)]
pub struct TorusBundle<'a> {
    pub pair: &'a ReductivePair,
    pub g: &'a Matrix,
    pub t_dim: usize,
    pub i: &'a Matrix,
}

#[derive(Clone, Copy, Debug)]
pub enum AsInput<'a> {
    TorusBundle(TorusBundle<'a>),
    KNilpotent(&'a KNilpotentSpec),
}

#[derive(Clone, Debug)]
pub struct CanonicalAs {
    pub carrier: Carrier,
    pub g: Matrix,
    /// The transverse complex structure, zero on the fibre.
    pub transverse: Matrix,
    /// Fibre (torus or centre) directions, all parallel.
    pub fibre: Vec<Vector>,
    pub map: ConnectionMap,
    pub t_form: Tensor,
    pub t: Tensor,
    pub curvature: Tensor,
}

pub fn canonical_as_connection(input: AsInput<'_>) -> Result<CanonicalAs> {
    match input {
        AsInput::TorusBundle(tb) => torus_bundle(tb),
        AsInput::KNilpotent(spec) => nilpotent(spec),
    }
}

/// Torsion 3-form of the torus-bundle connection.
pub fn torus_bundle_torsion(carrier: &Carrier, g: &Matrix, t_dim: usize) -> Tensor {
    let n = carrier.dim();
    let mut t = Tensor::zeros(n, false, 3);
    for u in 0..t_dim {
        for x in t_dim..n {
            for y in t_dim..n {
                let br = carrier.bracket_basis(x, y);
                let v: Scalar = -(0..t_dim).map(|a| &br[a] * &g[(a, u)]).sum::<Scalar>();
                if v.is_zero() {
                    continue;
                }
                for (idx, s) in [([u, x, y], 1), ([x, y, u], 1), ([y, u, x], 1), ([u, y, x], -1), ([y, x, u], -1), ([x, u, y], -1)] {
                    let w = if s > 0 { v.clone() } else { -&v };
                    t.set(&idx, w);
                }
            }
        }
    }
    t
}

/// Torsion 3-form of the nilpotent connection.
pub fn nilpotent_torsion(carrier: &Carrier, g: &Matrix) -> Tensor {
    let n = carrier.dim();
    let low: Vec<Vector> = (0..n * n).map(|k| g.mul_vec(&carrier.bracket_basis(k / n, k % n))).collect();
    Tensor::from_fn(n, false, 3, |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        -(&(&low[x * n + y][z] + &low[y * n + z][x]) + &low[z * n + x][y])
    })
}

fn torus_bundle(tb: TorusBundle<'_>) -> Result<CanonicalAs> {
    let carrier = Carrier::from_pair(tb.pair);
    let n = carrier.dim();
    let k = tb.t_dim;
    let nb = n - k;
    if tb.g.rows() != n || tb.g.cols() != n || k > n || tb.i.rows() != nb || tb.i.cols() != nb {
        return Err(shape("torus bundle metric or transverse structure has the wrong size"));
    }
    let unsupported = |m: &str| Err(Error::UnsupportedHypothesis(m.to_string()));
    for u in 0..k {
        for x in k..n {
            if !tb.g[(u, x)].is_zero() {
                return unsupported("fibre and horizontal directions are not orthogonal");
            }
        }
        for v in 0..k {
            if !carrier.bracket_basis(u, v).iter().all(Scalar::is_zero) {
                return unsupported("fibre directions do not commute");
            }
        }
        for x in k..n {
            if carrier.bracket_basis(u, x)[..k].iter().any(|c| !c.is_zero()) {
                return unsupported("fibre does not preserve the horizontal space");
            }
        }
    }
    let i = Matrix::block_diag(&[&Matrix::zeros(k, k), tb.i]);
    let gb = Matrix::from_fn(nb, nb, |a, b| tb.g[(k + a, k + b)].clone());
    if !tb.i.mul(tb.i).add(&Matrix::identity(nb)).is_zero() || tb.i.transpose().mul(&gb).mul(tb.i) != gb {
        return Err(Error::InvalidHermitian("transverse structure is not an orthogonal complex structure".into()));
    }
    for x in k..n {
        for y in k..n {
            let lhs = carrier.bracket(&i.mul_vec(&unit_vec(n, x)), &i.mul_vec(&unit_vec(n, y)));
            let rhs = carrier.bracket_basis(x, y);
            if lhs[..k] != rhs[..k] {
                return unsupported("transverse identity [IX,IY]_t = [X,Y]_t fails");
            }
        }
    }
    let t_form = torus_bundle_torsion(&carrier, tb.g, k);
    finish(carrier, tb.g.clone(), i, (0..k).map(|u| unit_vec(n, u)).collect(), t_form)
}

fn nilpotent(spec: &KNilpotentSpec) -> Result<CanonicalAs> {
    if !spec.is_abelian() {
        return Err(Error::UnsupportedHypothesis("the canonical nilpotent connection needs abelian k".into()));
    }
    let built = build_k_nilpotent(spec)?;
    let carrier = Carrier::from_algebra(&built.algebra);
    let k = spec.k_dim;
    let i = built.complex_structure(&Matrix::zeros(k, k));
    let t_form = nilpotent_torsion(&carrier, &built.g);
    let n = carrier.dim();
    finish(carrier, built.g, i, (0..k).map(|u| unit_vec(n, u)).collect(), t_form)
}

fn finish(carrier: Carrier, g: Matrix, transverse: Matrix, fibre: Vec<Vector>, t_form: Tensor) -> Result<CanonicalAs> {
    if !t_form.is_alternating() {
        return Err(inconsistent("canonical torsion is not alternating"));
    }
    let ginv = g.inverse().ok_or_else(|| shape("metric is degenerate"))?;
    let t = t_form.raise_last(&ginv);
    let map = levi_civita_of(&carrier, &g).add(&ConnectionMap::from_tensor(&t.scale(&Scalar::frac(1, 2))));
    if map.torsion(&carrier) != t {
        return Err(inconsistent("canonical connection has the wrong torsion"));
    }
    if !map.preserves(&Tensor::from_bilinear(&g)) {
        return Err(inconsistent("canonical connection is not metric"));
    }
    let curvature = curvature_of(&map, &carrier);
    let checks = [
        ("torsion", covariant_derivative(&map, &t_form)),
        ("curvature", covariant_derivative(&map, &curvature)),
        ("transverse structure", covariant_derivative(&map, &Tensor::from_endomorphism(&transverse))),
    ];
    for (what, d) in checks {
        if !d.is_zero() {
            return Err(inconsistent(format!("canonical connection: {what} is not parallel")));
        }
    }
    for u in &fibre {
        if (0..carrier.dim()).any(|x| map.at(x).mul_vec(u).iter().any(|c| !c.is_zero())) {
            return Err(inconsistent("canonical connection: a fibre direction is not parallel"));
        }
    }
    Ok(CanonicalAs { carrier, g, transverse, fibre, map, t_form, t, curvature })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::bismut;
    use crate::constructions::catalog::{calabi_eckmann, su2};
    use crate::scalar::qi;

    fn hopf_pair() -> ReductivePair {
        // fibre X3 first, then X1, X2
        let n = 3;
        ReductivePair::new(
            su2(["X1", "X2", "X3"]),
            Vec::new(),
            vec![unit_vec(n, 2), unit_vec(n, 0), unit_vec(n, 1)],
            vec!["X3".into(), "X1".into(), "X2".into()],
        )
        .unwrap()
    }

    #[test]
    fn hopf_fibration() {
        let p = hopf_pair();
        let g = Matrix::identity(3);
        let i = Matrix::from_ints(2, 2, &[0, -1, 1, 0]);
        let c = canonical_as_connection(AsInput::TorusBundle(TorusBundle { pair: &p, g: &g, t_dim: 1, i: &i })).unwrap();
        // T(U, X1, X2) = -g([X1, X2]_t, U) = -1
        assert_eq!(*c.t_form.get(&[0, 1, 2]), qi(-1));
        for (idx, v) in c.map.torsion(&c.carrier).lower_with(&g).nonzero_entries() {
            assert_eq!(v, c.t_form.get(&idx));
        }
        assert_eq!(c.map.torsion(&c.carrier).lower_with(&g), c.t_form);
    }

    #[test]
    fn calabi_eckmann_torsion_is_the_bismut_torsion() {
        for (p, q, r) in [(1, 0, 1), (1, 0, 4), (2, 1, 1)] {
            let h = calabi_eckmann(&qi(p), &qi(q), &qi(r)).unwrap();
            let alg = h.carrier().algebra().unwrap().clone();
            // m frame: X3, Y3, then X1, X2, Y1, Y2
            let order = [4, 5, 0, 1, 2, 3];
            let frame: Vec<Vector> = order.iter().map(|&a| unit_vec(6, a)).collect();
            let names = order.iter().map(|&a| alg.name(a).to_string()).collect();
            let pair = ReductivePair::new(alg.clone(), Vec::new(), frame, names).unwrap();
            let perm = Matrix::from_fn(6, 6, |a, b| if a == order[b] { qi(1) } else { qi(0) });
            let g = perm.transpose().mul(h.g()).mul(&perm);
            let i = Matrix::from_ints(4, 4, &[0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0]);
            let c = canonical_as_connection(AsInput::TorusBundle(TorusBundle { pair: &pair, g: &g, t_dim: 2, i: &i })).unwrap();
            let b = bismut(&h).unwrap();
            let permuted = b.t_form.permute_basis(&order);
            assert_eq!(c.t_form, permuted, "({p},{q},{r})");
        }
    }

    #[test]
    fn heisenberg_connection() {
        let spec = KNilpotentSpec::diagonal(1, &[vec![qi(1)]]);
        let c = canonical_as_connection(AsInput::KNilpotent(&spec)).unwrap();
        // basis z, v1, v2 with [v1, v2] = z: T(v1, v2, z) = -1
        assert_eq!(*c.t_form.get(&[1, 2, 0]), qi(-1));
        assert_eq!(c.fibre.len(), 1);
    }

    #[test]
    fn quaternionic_is_unsupported() {
        let spec = KNilpotentSpec::quaternionic(1);
        assert!(matches!(canonical_as_connection(AsInput::KNilpotent(&spec)), Err(Error::UnsupportedHypothesis(_))));
    }
}
