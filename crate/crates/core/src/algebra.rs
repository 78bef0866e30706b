//! Finite-dimensional real Lie algebras given by rational structure constants.

use std::collections::BTreeSet;

use crate::error::{shape, Error, Result};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, RowSpace, Subspace, Vector};
use crate::scalar::Scalar;

/// A Lie algebra with basis `x_0..x_{n-1}` and `[x_i, x_j] = sum_k c[k][i][j] x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    c: Vec<Scalar>,
}

/// Structural data computed by [`analyze_algebra`].
#[derive(Clone, Debug)]
pub struct AlgebraAnalysis {
    pub centre: Subspace,
    pub derived: Subspace,
    pub lower_central: Vec<Subspace>,
    /// `None` when the algebra is not nilpotent.
    pub nilpotency_class: Option<usize>,
    pub killing: Matrix,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(names: Vec<String>, c: Vec<Scalar>) -> Result<Self> {
        let n = names.len();
        if c.len() != n * n * n {
            return Err(shape(format!("expected {} structure constants, got {}", n * n * n, c.len())));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(shape("basis names must be distinct"));
        }
        let g = LieAlgebra { names, c };
        g.validate()?;
        Ok(g)
    }

    /// Builds from sparse brackets `[x_i, x_j] = sum coeff * x_k`, `i != j`;
    /// antisymmetry is filled in.
    pub fn from_brackets(names: &[&str], brackets: &[(usize, usize, Vec<(usize, Scalar)>)]) -> Result<Self> {
        let n = names.len();
        let mut c = vec![Scalar::zero(); n * n * n];
        for (i, j, vals) in brackets {
            if *i >= n || *j >= n || i == j {
                return Err(shape(format!("bad bracket index pair ({i}, {j})")));
            }
            for (k, v) in vals {
                if *k >= n {
                    return Err(shape(format!("bad bracket target {k}")));
                }
                c[k * n * n + i * n + j] += v;
                c[k * n * n + j * n + i] -= v;
            }
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), c)
    }

    /// Like [`Self::from_brackets`] with integer coefficients.
    pub fn from_int_brackets(names: &[&str], brackets: &[(usize, usize, &[(usize, i64)])]) -> Result<Self> {
        let b: Vec<_> = brackets
            .iter()
            .map(|(i, j, v)| (*i, *j, v.iter().map(|(k, x)| (*k, Scalar::from_int(*x))).collect()))
            .collect();
        Self::from_brackets(names, &b)
    }

    pub fn abelian(names: &[&str]) -> Self {
        Self::from_brackets(names, &[]).expect("abelian algebra is valid")
    }

    /// Default names `prefix1..prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn new_unchecked(names: Vec<String>, c: Vec<Scalar>) -> Self {
        LieAlgebra { names, c }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim() || names.iter().collect::<BTreeSet<_>>().len() != names.len() {
            return Err(shape("renaming needs distinct names of the right count"));
        }
        self.names = names;
        Ok(self)
    }

    /// Structure constant `c[k][i][j]`.
    pub fn c(&self, k: usize, i: usize, j: usize) -> &Scalar {
        let n = self.dim();
        &self.c[k * n * n + i * n + j]
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// `[x_i, x_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        (0..self.dim()).map(|k| self.c(k, i, j).clone()).collect()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let f = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(k, i, j);
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)`: column `j` is `[x, x_j]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = self.c(k, i, j);
                    if !c.is_zero() {
                        m[(k, j)] += &x[i] * c;
                    }
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        self.ad(&unit_vec(self.dim(), i))
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let triple = |i: usize, j: usize, k: usize| {
            (self.names[i].clone(), self.names[j].clone(), self.names[k].clone())
        };
        for k in 0..n {
            for i in 0..n {
                if !self.c(k, i, i).is_zero() {
                    return Err(Error::NotALieAlgebra {
                        reason: format!("[{0},{0}] != 0", self.names[i]),
                        triple: triple(i, i, k),
                    });
                }
                for j in 0..i {
                    if self.c(k, i, j) != &-self.c(k, j, i) {
                        return Err(Error::NotALieAlgebra {
                            reason: "bracket is not antisymmetric".into(),
                            triple: triple(i, j, k),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let jac = self.jacobiator(i, j, k);
                    if !is_zero_vec(&jac) {
                        return Err(Error::NotALieAlgebra {
                            reason: "Jacobi identity fails".into(),
                            triple: triple(i, j, k),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `[[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]`
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for m in 0..n {
                let s = self.c(m, a, b);
                if s.is_zero() {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    let t = self.c(l, m, c);
                    if !t.is_zero() {
                        *o += s * t;
                    }
                }
            }
        }
        out
    }

    /// Span of `[U, W]`.
    pub fn bracket_spaces(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in u.basis() {
            for b in w.basis() {
                vs.push(self.bracket(a, b));
            }
        }
        Subspace::span(self.dim(), &vs)
    }

    pub fn is_subalgebra(&self, u: &Subspace) -> bool {
        self.bracket_spaces(u, u).is_subspace_of(u)
    }

    pub fn is_ideal(&self, u: &Subspace) -> bool {
        self.bracket_spaces(&Subspace::full(self.dim()), u).is_subspace_of(u)
    }

    pub fn centre(&self) -> Subspace {
        let n = self.dim();
        let mut rs = RowSpace::new(n);
        for i in 0..n {
            let a = self.ad_basis(i);
            for r in 0..n {
                rs.insert(a.row(r).to_vec());
            }
        }
        Subspace::span(n, &rs.kernel())
    }

    pub fn derived(&self) -> Subspace {
        let full = Subspace::full(self.dim());
        self.bracket_spaces(&full, &full)
    }

    /// `g = g^1 ⊇ g^2 = [g,g] ⊇ ...` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim());
        let mut series = vec![full.clone()];
        loop {
            let next = self.bracket_spaces(&full, series.last().unwrap());
            if &next == series.last().unwrap() {
                break;
            }
            series.push(next);
        }
        series
    }

    /// Class of nilpotency: 0 for the zero algebra, 1 for abelian, `None`
    /// if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        if self.dim() == 0 {
            return Some(0);
        }
        let series = self.lower_central_series();
        if series.last().unwrap().is_zero() {
            Some(series.len() - 1)
        } else {
            None
        }
    }

    pub fn killing(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        Matrix::from_fn(n, n, |i, j| ads[i].mul(&ads[j]).trace())
    }

    /// Structure constants in a new basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix, names: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        let pinv = p.inverse().ok_or_else(|| shape("change of basis is singular"))?;
        let cols: Vec<Vector> = (0..n).map(|j| p.col(j)).collect();
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let b = pinv.mul_vec(&self.bracket(&cols[i], &cols[j]));
                for (k, v) in b.into_iter().enumerate() {
                    c[k * n * n + i * n + j] = v;
                }
            }
        }
        LieAlgebra::new_unchecked(self.names.clone(), c).with_names(names)
    }

    /// Largest ideal of the algebra contained in `u`.
    pub fn max_ideal_in(&self, u: &Subspace) -> Subspace {
        let n = self.dim();
        let mut cur = u.clone();
        loop {
            if cur.is_zero() {
                return cur;
            }
            // x in cur with [x_i, x] in cur for every basis x_i
            let ann = annihilator_rows(&cur);
            let frame = cur.basis().to_vec();
            let k = frame.len();
            let mut rs = RowSpace::new(k);
            for i in 0..n {
                let a = self.ad_basis(i);
                for w in &ann {
                    let wa: Vector = (0..n).map(|c| (0..n).map(|r| &w[r] * &a[(r, c)]).sum()).collect();
                    let row: Vector = frame.iter().map(|f| crate::linalg::dot(&wa, f)).collect();
                    rs.insert(row);
                }
            }
            let next: Vec<Vector> = rs
                .kernel()
                .iter()
                .map(|coef| {
                    let mut v = zero_vec(n);
                    for (c, f) in coef.iter().zip(&frame) {
                        axpy(&mut v, c, f);
                    }
                    v
                })
                .collect();
            let next = Subspace::span(n, &next);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Quotient by an ideal, with basis the images of `complement`
    /// (which must span a complement of the ideal).
    pub fn quotient(&self, ideal: &Subspace, complement: &[Vector], names: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        if !self.is_ideal(ideal) {
            return Err(Error::NotASubalgebra("quotient by a non-ideal".into()));
        }
        let q = complement.len();
        if q + ideal.dim() != n || names.len() != q {
            return Err(shape("complement has the wrong dimension"));
        }
        let mut cols: Vec<Vector> = ideal.basis().to_vec();
        cols.extend(complement.iter().cloned());
        let pinv = Matrix::from_cols(n, &cols).inverse().ok_or_else(|| shape("complement meets the ideal"))?;
        let off = ideal.dim();
        let mut c = vec![Scalar::zero(); q * q * q];
        for i in 0..q {
            for j in 0..q {
                let b = pinv.mul_vec(&self.bracket(&complement[i], &complement[j]));
                for k in 0..q {
                    c[k * q * q + i * q + j] = b[off + k].clone();
                }
            }
        }
        LieAlgebra::new(names, c)
    }
}

/// Rows `w` with `w . v = 0` for all `v` in `u` (spanning the annihilator).
pub fn annihilator_rows(u: &Subspace) -> Vec<Vector> {
    let n = u.ambient();
    let mut rs = RowSpace::new(n);
    for v in u.basis() {
        rs.insert(v.clone());
    }
    rs.kernel()
}

/// Centre, series, class and Killing form.
pub fn analyze_algebra(g: &LieAlgebra) -> Result<AlgebraAnalysis> {
    g.validate()?;
    let lower_central = g.lower_central_series();
    Ok(AlgebraAnalysis {
        centre: g.centre(),
        derived: g.derived(),
        nilpotency_class: g.nilpotency_class(),
        lower_central,
        killing: g.killing(),
    })
}

/// Direct sum with block structure constants; clashing names of the second
/// summand get a numeric suffix.
pub fn direct_sum(g1: &LieAlgebra, g2: &LieAlgebra) -> LieAlgebra {
    let (a, b) = (g1.dim(), g2.dim());
    let n = a + b;
    let mut names = g1.names.clone();
    for s in &g2.names {
        let mut cand = s.clone();
        let mut k = 2;
        while names.contains(&cand) || (cand != *s && g2.names.contains(&cand)) {
            cand = format!("{s}_{k}");
            k += 1;
        }
        names.push(cand);
    }
    let mut c = vec![Scalar::zero(); n * n * n];
    for k in 0..a {
        for i in 0..a {
            for j in 0..a {
                c[k * n * n + i * n + j] = g1.c(k, i, j).clone();
            }
        }
    }
    for k in 0..b {
        for i in 0..b {
            for j in 0..b {
                c[(a + k) * n * n + (a + i) * n + (a + j)] = g2.c(k, i, j).clone();
            }
        }
    }
    LieAlgebra::new_unchecked(names, c)
}

/// A complex rational number `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Complex {
    pub re: Scalar,
    pub im: Scalar,
}

impl Complex {
    pub fn real(re: Scalar) -> Self {
        Complex { re, im: Scalar::zero() }
    }
}

/// Realification of a complex Lie algebra.
///
/// The real basis is interleaved: `x_1, i x_1, x_2, i x_2, ...`. Returns the
/// algebra and the matrix of multiplication by `i`.
pub fn realify(names: &[&str], c: &[Complex]) -> Result<(LieAlgebra, Matrix)> {
    let n = names.len();
    if c.len() != n * n * n {
        return Err(shape("complex structure constants have the wrong length"));
    }
    let m = 2 * n;
    let mut rc = vec![Scalar::zero(); m * m * m];
    // [a x_i, b x_j] with a, b in {1, i}: product of units times c
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let z = &c[k * n * n + i * n + j];
                for (ui, ri) in [(0usize, 0usize), (1, 1)] {
                    for (uj, rj) in [(0usize, 0usize), (1, 1)] {
                        // unit product i^(ui+uj) * z
                        let e = ui + uj;
                        let (re, im) = match e {
                            0 => (z.re.clone(), z.im.clone()),
                            1 => (-&z.im, z.re.clone()),
                            _ => (-&z.re, -&z.im),
                        };
                        let (a, b) = (2 * i + ri, 2 * j + rj);
                        rc[(2 * k) * m * m + a * m + b] = re;
                        rc[(2 * k + 1) * m * m + a * m + b] = im;
                    }
                }
            }
        }
    }
    let mut rn = Vec::with_capacity(m);
    for s in names {
        rn.push(s.to_string());
        rn.push(format!("i{s}"));
    }
    let g = LieAlgebra::new(rn, rc)?;
    let mut jm = Matrix::zeros(m, m);
    for i in 0..n {
        jm[(2 * i + 1, 2 * i)] = Scalar::one();
        jm[(2 * i, 2 * i + 1)] = Scalar::from_int(-1);
    }
    Ok((g, jm))
}

/// `{x : [x, u] ⊆ u}`.
pub fn relative_normalizer(g: &LieAlgebra, u: &Subspace) -> Result<Subspace> {
    if !g.is_subalgebra(u) {
        return Err(Error::NotASubalgebra("normalizer of a non-subalgebra".into()));
    }
    let n = g.dim();
    let ann = annihilator_rows(u);
    let mut rs = RowSpace::new(n);
    for b in u.basis() {
        // [x, b] = -ad(b) x
        let a = g.ad(b);
        for w in &ann {
            let row: Vector = (0..n).map(|c| (0..n).map(|r| &w[r] * &a[(r, c)]).sum()).collect();
            rs.insert(row);
        }
    }
    Ok(Subspace::span(n, &rs.kernel()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn kodaira() -> LieAlgebra {
        LieAlgebra::from_int_brackets(&["z", "w", "e", "Je"], &[(2, 3, &[(0, 1)])]).unwrap()
    }

    fn sl2() -> LieAlgebra {
        LieAlgebra::from_int_brackets(&["h", "e", "f"], &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])])
            .unwrap()
    }

    fn h3() -> LieAlgebra {
        LieAlgebra::from_int_brackets(&["x", "y", "z"], &[(0, 1, &[(2, 1)])]).unwrap()
    }

    #[test]
    fn abelian_analysis() {
        let a = analyze_algebra(&LieAlgebra::abelian(&["a", "b", "c", "d"])).unwrap();
        assert_eq!(a.centre.dim(), 4);
        assert_eq!(a.nilpotency_class, Some(1));
        assert!(a.killing.is_zero());
    }

    #[test]
    fn kodaira_analysis() {
        let a = analyze_algebra(&kodaira()).unwrap();
        assert_eq!(a.centre, Subspace::span(4, &[unit_vec(4, 0), unit_vec(4, 1)]));
        assert_eq!(a.nilpotency_class, Some(2));
        assert!(a.killing.is_zero());
        assert_eq!(a.derived.dim(), 1);
    }

    #[test]
    fn kodaira_centre_by_stacked_solve() {
        let g = kodaira();
        let rows: Vec<Vector> = (0..4).flat_map(|i| g.ad_basis(i).to_rows()).collect();
        let s = crate::linalg::linear_solve(&Matrix::from_rows(&rows).unwrap(), &zero_vec(16)).unwrap();
        assert_eq!(Subspace::span(4, &s.kernel), Subspace::span(4, &[unit_vec(4, 0), unit_vec(4, 1)]));
    }

    #[test]
    fn sl2_killing() {
        let a = analyze_algebra(&sl2()).unwrap();
        assert_eq!(a.killing[(0, 0)], qi(8));
        assert_eq!(a.killing[(1, 2)], qi(4));
        assert_eq!(a.centre.dim(), 0);
        assert_eq!(a.nilpotency_class, None);
    }

    #[test]
    fn jacobi_failure_names_triple() {
        let bad = LieAlgebra::from_int_brackets(&["a", "b", "c"], &[(0, 1, &[(2, 1)]), (1, 2, &[(1, 1)])]);
        match bad {
            Err(Error::NotALieAlgebra { triple, .. }) => assert_eq!(triple, ("a".into(), "b".into(), "c".into())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn direct_sums() {
        let r2 = LieAlgebra::abelian(&["a", "b"]);
        assert!(direct_sum(&r2, &r2).is_abelian());
        assert_eq!(direct_sum(&r2, &r2).names(), &["a", "b", "a_2", "b_2"]);
        let hh = direct_sum(&h3(), &h3());
        assert_eq!(hh.dim(), 6);
        assert_eq!(hh.centre().dim(), 2);
        let k = direct_sum(&h3(), &LieAlgebra::abelian(&["w"]));
        assert_eq!(k.centre().dim(), 2);
        assert_eq!(k.nilpotency_class(), Some(2));
    }

    #[test]
    fn realify_examples() {
        let (a, j) = realify(&["u"], &[Complex::default()]).unwrap();
        assert!(a.is_abelian());
        assert_eq!(j, Matrix::from_ints(2, 2, &[0, -1, 1, 0]));

        // h3(C): [X,Y] = Z
        let n = 3;
        let mut c = vec![Complex::default(); 27];
        c[2 * n * n + 0 * n + 1] = Complex::real(qi(1));
        c[2 * n * n + n] = Complex::real(qi(-1));
        let (h, _) = realify(&["X", "Y", "Z"], &c).unwrap();
        // e1 = X, e2 = iX, e3 = Y, e4 = iY, z1 = Z, z2 = iZ
        let b = |i, j| h.bracket_basis(i, j);
        assert_eq!(b(0, 2), unit_vec(6, 4));
        assert_eq!(b(1, 3), crate::linalg::scale_vec(&qi(-1), &unit_vec(6, 4)));
        assert_eq!(b(0, 3), unit_vec(6, 5));
        assert_eq!(b(1, 2), unit_vec(6, 5));
    }

    #[test]
    fn normalizers() {
        let g = sl2();
        let h = Subspace::span(3, &[unit_vec(3, 0)]);
        assert_eq!(relative_normalizer(&g, &h).unwrap(), h);
        let full = Subspace::full(3);
        assert_eq!(relative_normalizer(&g, &full).unwrap(), full);
        let bad = Subspace::span(3, &[unit_vec(3, 1), unit_vec(3, 2)]);
        assert!(matches!(relative_normalizer(&g, &bad), Err(Error::NotASubalgebra(_))));
    }

    #[test]
    fn max_ideal_and_quotient() {
        let g = kodaira();
        let u = Subspace::span(4, &[unit_vec(4, 1), unit_vec(4, 2)]);
        assert_eq!(g.max_ideal_in(&u), Subspace::span(4, &[unit_vec(4, 1)]));
        let ze = Subspace::span(4, &[unit_vec(4, 0), unit_vec(4, 2)]);
        assert_eq!(g.max_ideal_in(&ze), ze);
        let z = Subspace::span(4, &[unit_vec(4, 0)]);
        let q = g.quotient(&z, &[unit_vec(4, 1), unit_vec(4, 2), unit_vec(4, 3)], vec!["w".into(), "e".into(), "Je".into()]).unwrap();
        assert!(q.is_abelian());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn killing_is_ad_invariant(g in prop_oneof![Just(sl2()), Just(kodaira()), crate::algebra::tests_support::random_algebra()]) {
                let k = g.killing();
                let n = g.dim();
                for x in 0..n { for y in 0..n { for z in 0..n {
                    let s = k.bilinear(&g.bracket_basis(x, y), &unit_vec(n, z)) + k.bilinear(&unit_vec(n, y), &g.bracket_basis(x, z));
                    prop_assert!(s.is_zero());
                }}}
            }

            #[test]
            fn centre_of_sum_is_sum_of_centres(g in crate::algebra::tests_support::random_algebra()) {
                let s = direct_sum(&g, &sl2());
                prop_assert_eq!(s.centre().dim(), g.centre().dim());
                let s2 = direct_sum(&g, &kodaira());
                prop_assert_eq!(s2.centre().dim(), g.centre().dim() + 2);
            }

            #[test]
            fn normalizer_contains_and_is_subalgebra(g in crate::algebra::tests_support::random_algebra(), pick in 0usize..8) {
                let u = Subspace::span(8, &[unit_vec(8, pick)]);
                let nz = relative_normalizer(&g, &u).unwrap();
                prop_assert!(u.is_subspace_of(&nz));
                prop_assert!(g.is_subalgebra(&nz));
            }
        }
    }
}
