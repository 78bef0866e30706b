//! Named example structures with their expected verdicts.

use std::collections::BTreeMap;

use crate::algebra::{direct_sum, realify, Complex, LieAlgebra};
use crate::connections::verdict_suite;
use crate::error::{shape, Error, Result};
use crate::hermitian::HermitianData;
use crate::linalg::{unit_vec, Matrix};
use crate::scalar::{qi, Scalar};
use crate::verdict::Verdict;

use super::knil::{build_k_nilpotent, KNilpotentSpec};
use super::nildecide::{decide_nilpotent_bas, NilVerdict};
use super::witness::{ComplexSemisimpleData, TorusWitnessData};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub hermitian: HermitianData,
    /// Checks with a known outcome; other checks are not pinned.
    pub expected: BTreeMap<String, bool>,
}

/// Outcome of recomputing an entry's verdicts.
#[derive(Clone, Debug)]
pub struct CatalogCheck {
    pub verdict: Verdict,
    /// `(check, expected, actual)` for every disagreement.
    pub mismatches: Vec<(String, bool, bool)>,
}

impl CatalogCheck {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl CatalogEntry {
    pub fn verify(&self) -> Result<CatalogCheck> {
        let verdict = verdict_suite(&self.hermitian)?;
        let mismatches = self
            .expected
            .iter()
            .filter_map(|(k, &want)| {
                let got = verdict.get(k).map(|c| c.pass);
                (got != Some(want)).then(|| (k.clone(), want, got.unwrap_or(!want)))
            })
            .collect();
        Ok(CatalogCheck { verdict, mismatches })
    }
}

/// Calabi–Eckmann torus-block parameters `(p, q, r)` shipped in the catalog.
/// The structure is pluriclosed exactly when `q = 0`, i.e. when the two
/// Hopf fibres are orthogonal and the metric is a Riemannian product.
pub const CALABI_ECKMANN_VARIANTS: [(&str, (i64, i64, i64)); 4] = [
    ("calabi_eckmann", (1, 0, 1)),
    ("calabi_eckmann_mixed", (1, 0, 4)),
    ("calabi_eckmann_scaled", (4, 0, 9)),
    ("calabi_eckmann_sheared", (2, 1, 1)),
];

/// Nilpotent entries built from Heisenberg and abelian summands.
pub const HEISENBERG_LIST: [&str; 10] =
    ["r1_h3", "r3_h3", "r1_h5", "h3_h3", "r5_h3", "r3_h5", "r2_h3_h3", "r1_h7", "h3_h5", "n8_11"];

/// Every catalog name, in a fixed order.
pub fn list() -> Vec<&'static str> {
    let mut v = vec!["abelian4", "kodaira4"];
    v.extend(HEISENBERG_LIST);
    v.extend(["h3C_natural", "sl2c_canonical"]);
    v.extend(CALABI_ECKMANN_VARIANTS.iter().map(|(n, _)| *n));
    v.extend(["h3_x_su2", "sl2r_torus", "kodaira4_x_sl2c"]);
    v
}

fn j_pairs(n: usize) -> Matrix {
    let mut j = Matrix::zeros(n, n);
    for a in (0..n).step_by(2) {
        j[(a + 1, a)] = Scalar::one();
        j[(a, a + 1)] = Scalar::from_int(-1);
    }
    j
}

/// `𝔥_{2n+1}` with basis `x1 y1 .. xn yn z` and `[xi, yi] = z`, names
/// suffixed by `tag`.
pub fn heisenberg(n: usize, tag: &str) -> LieAlgebra {
    let mut names: Vec<String> = Vec::new();
    for i in 1..=n {
        names.push(format!("x{i}{tag}"));
        names.push(format!("y{i}{tag}"));
    }
    names.push(format!("z{tag}"));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let br: Vec<(usize, usize, Vec<(usize, Scalar)>)> = (0..n).map(|i| (2 * i, 2 * i + 1, vec![(2 * n, qi(1))])).collect();
    LieAlgebra::from_brackets(&refs, &br).expect("Heisenberg algebra")
}

fn abelian(k: usize, tag: &str) -> LieAlgebra {
    let names: Vec<String> = (1..=k).map(|i| format!("t{i}{tag}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    LieAlgebra::abelian(&refs)
}

/// The nilpotent algebras of the low-dimensional BAS list.
pub fn heisenberg_list_algebra(name: &str) -> Result<LieAlgebra> {
    let sum = |a: LieAlgebra, b: LieAlgebra| direct_sum(&a, &b);
    Ok(match name {
        "r1_h3" => sum(abelian(1, ""), heisenberg(1, "")),
        "r3_h3" => sum(abelian(3, ""), heisenberg(1, "")),
        "r1_h5" => sum(abelian(1, ""), heisenberg(2, "")),
        "h3_h3" => sum(heisenberg(1, "a"), heisenberg(1, "b")),
        "r5_h3" => sum(abelian(5, ""), heisenberg(1, "")),
        "r3_h5" => sum(abelian(3, ""), heisenberg(2, "")),
        "r2_h3_h3" => sum(abelian(2, ""), sum(heisenberg(1, "a"), heisenberg(1, "b"))),
        "r1_h7" => sum(abelian(1, ""), heisenberg(3, "")),
        "h3_h5" => sum(heisenberg(1, "a"), heisenberg(2, "b")),
        "n8_11" => {
            let spec = KNilpotentSpec::diagonal(2, &[vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]]);
            build_k_nilpotent(&spec)?.algebra
        }
        _ => return Err(Error::UnknownEntry(name.to_string())),
    })
}

/// A nilpotent algebra with the standard structure of its normal-form
/// witness. Fails with `NotBas` when the decision is not an exact yes.
pub fn nilpotent_standard(n: &LieAlgebra) -> Result<HermitianData> {
    let dec = decide_nilpotent_bas(n);
    match (dec.verdict, dec.witness) {
        (NilVerdict::Yes, Some(w)) => w.standard_structure(n),
        _ => Err(Error::NotBas(format!("nilpotent decision is {:?}", dec.verdict))),
    }
}

pub fn kodaira4() -> HermitianData {
    let g = LieAlgebra::from_int_brackets(&["z", "w", "e", "Je"], &[(2, 3, &[(0, 1)])]).expect("Kodaira algebra");
    HermitianData::on_algebra(&g, Matrix::identity(4), j_pairs(4)).expect("Kodaira structure")
}

/// Realified `𝔥₃(ℂ)` with `J = i` and the identity metric.
pub fn h3c_natural() -> HermitianData {
    let mut c = vec![Complex::default(); 27];
    c[2 * 9 + 1] = Complex::real(qi(1));
    c[2 * 9 + 3] = Complex::real(qi(-1));
    let (g, j) = realify(&["x", "y", "w"], &c).expect("complex Heisenberg");
    HermitianData::on_algebra(&g, Matrix::identity(6), j).expect("natural structure")
}

/// `𝔰𝔲(2)` with `[X1,X2] = X3` and cyclic permutations; `names` are used
/// for `X1, X2, X3`.
pub fn su2(names: [&str; 3]) -> LieAlgebra {
    LieAlgebra::from_int_brackets(&names, &[(0, 1, &[(2, 1)]), (1, 2, &[(0, 1)]), (2, 0, &[(1, 1)])]).expect("su(2)")
}

/// `𝔰𝔩(2,ℂ)` realified from the compact form `𝔰𝔲(2)`, with `J = i` and the
/// canonical metric `-B` on `𝔰𝔲(2)` plus `B` on `i 𝔰𝔲(2)`, `B` the Killing
/// form of the realification. Basis `X1, iX1, X2, iX2, X3, iX3`.
pub fn sl2c_canonical() -> HermitianData {
    let mut c = vec![Complex::default(); 27];
    for (a, b, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        c[k * 9 + a * 3 + b] = Complex::real(qi(1));
        c[k * 9 + b * 3 + a] = Complex::real(qi(-1));
    }
    let (g, j) = realify(&["X1", "X2", "X3"], &c).expect("sl(2,C)");
    let kf = g.killing();
    let metric = Matrix::from_fn(6, 6, |a, b| if a % 2 == 0 { -&kf[(a, b)] } else { kf[(a, b)].clone() });
    HermitianData::on_algebra(&g, metric, j).expect("canonical structure")
}

/// `√x` when `x` is the square of a rational.
pub fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == n && &rd * &rd == d).then(|| Scalar::from(rn) / Scalar::from(rd))
}

/// Torus block `J_t = (1/√D) [[-q, -r], [p, q]]` compatible with the metric
/// `[[p, q], [q, r]]`, `D = pr - q²`.
pub fn torus_block(p: &Scalar, q: &Scalar, r: &Scalar) -> Result<(Matrix, Matrix)> {
    let disc = &(p * r) - &(q * q);
    if !p.is_positive() || !disc.is_positive() {
        return Err(shape("torus metric [[p, q], [q, r]] must be positive definite"));
    }
    let s = rational_sqrt(&disc).ok_or_else(|| shape(format!("pr - q^2 = {disc} is not a rational square")))?;
    let inv = s.recip();
    let g = Matrix::from_rows(&[vec![p.clone(), q.clone()], vec![q.clone(), r.clone()]])?;
    let j = Matrix::from_rows(&[vec![-q, -r], vec![p.clone(), q.clone()]])?.scale(&inv);
    Ok((g, j))
}

/// `S³ × S³ = SU(2) × SU(2)` with the standard metric on the horizontal
/// part `X1, X2, Y1, Y2`, the torus metric `[[p, q], [q, r]]` on `X3, Y3`,
/// `J X1 = X2`, `J Y1 = Y2` and the compatible torus block.
/// Basis order `X1, X2, Y1, Y2, X3, Y3`.
pub fn calabi_eckmann(p: &Scalar, q: &Scalar, r: &Scalar) -> Result<HermitianData> {
    let (gt, jt) = torus_block(p, q, r)?;
    let algebra = calabi_eckmann_algebra();
    let metric = Matrix::block_diag(&[&Matrix::identity(4), &gt]);
    let j = Matrix::block_diag(&[&j_pairs(4), &jt]);
    HermitianData::on_algebra(&algebra, metric, j)
}

/// `𝔰𝔲(2) ⊕ 𝔰𝔲(2)` in the basis `X1, X2, Y1, Y2, X3, Y3`.
pub fn calabi_eckmann_algebra() -> LieAlgebra {
    let s = direct_sum(&su2(["X1", "X2", "X3"]), &su2(["Y1", "Y2", "Y3"]));
    // columns: X1 X2 Y1 Y2 X3 Y3 in the X1 X2 X3 Y1 Y2 Y3 basis
    let p = Matrix::from_fn(6, 6, |i, j| {
        let src = [0, 1, 3, 4, 2, 5][j];
        if i == src {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    s.change_basis(&p, ["X1", "X2", "Y1", "Y2", "X3", "Y3"].iter().map(|s| s.to_string()).collect())
        .expect("permutation")
}

/// `𝔥₃ ⊕ 𝔰𝔲(2)` with `J z = X3`, `J x = y`, `J X1 = X2` and the identity
/// metric. Basis `x, y, X1, X2, z, X3`.
pub fn h3_x_su2() -> HermitianData {
    let s = direct_sum(&heisenberg(1, ""), &su2(["X1", "X2", "X3"]));
    // source basis x y z X1 X2 X3
    let order = [0, 1, 3, 4, 2, 5];
    let p = Matrix::from_fn(6, 6, |i, j| if i == order[j] { Scalar::one() } else { Scalar::zero() });
    let g = s
        .change_basis(&p, ["x", "y", "X1", "X2", "z", "X3"].iter().map(|s| s.to_string()).collect())
        .expect("permutation");
    HermitianData::on_algebra(&g, Matrix::identity(6), j_pairs(6)).expect("product structure")
}

/// `𝔰𝔩(2,ℝ)` with `[T,P1] = P2`, `[T,P2] = -P1`, `[P1,P2] = -T`.
pub fn sl2r() -> LieAlgebra {
    LieAlgebra::from_int_brackets(&["T", "P1", "P2"], &[(0, 1, &[(2, 1)]), (0, 2, &[(1, -1)]), (1, 2, &[(0, -1)])])
        .expect("sl(2,R)")
}

/// `ℝ × SL(2,ℝ)`: the torus bundle over the hyperbolic plane with an extra
/// line. Basis `P1, P2, U, T`; `J P1 = P2`, `J U = T`; the metric is the
/// identity, which is half the Killing form on `P1, P2`.
pub fn sl2r_torus() -> HermitianData {
    let s = direct_sum(&sl2r(), &LieAlgebra::abelian(&["U"]));
    // source basis T P1 P2 U
    let order = [1, 2, 3, 0];
    let p = Matrix::from_fn(4, 4, |i, j| if i == order[j] { Scalar::one() } else { Scalar::zero() });
    let g = s.change_basis(&p, ["P1", "P2", "U", "T"].iter().map(|s| s.to_string()).collect()).expect("permutation");
    HermitianData::on_algebra(&g, Matrix::identity(4), j_pairs(4)).expect("torus bundle structure")
}

/// Complex semisimple witness data for `sl(2,C)`: compact form `su(2)`
/// spanned by `X1, X2, X3` in the realified basis `X1, iX1, X2, iX2, X3, iX3`.
pub fn sl2c_witness_data() -> ComplexSemisimpleData {
    let h = sl2c_canonical();
    let s = h.carrier().algebra().expect("group").clone();
    ComplexSemisimpleData { k: (0..3).map(|a| unit_vec(6, 2 * a)).collect(), j: h.j().clone(), s }
}

/// Compact torus bundle data for Calabi–Eckmann: `Q = -½B = Id`, trivial
/// isotropy, fibre `X3, Y3`, horizontal `X1, X2, Y1, Y2`.
pub fn calabi_eckmann_witness_data(p: &Scalar, q: &Scalar, r: &Scalar) -> Result<TorusWitnessData> {
    let (gt, jt) = torus_block(p, q, r)?;
    Ok(TorusWitnessData {
        algebra: calabi_eckmann_algebra(),
        h: Vec::new(),
        t: vec![unit_vec(6, 4), unit_vec(6, 5)],
        b: (0..4).map(|a| unit_vec(6, a)).collect(),
        q: Matrix::identity(6),
        metric: Matrix::block_diag(&[&gt, &Matrix::identity(4)]),
        j: Matrix::block_diag(&[&jt, &j_pairs(4)]),
    })
}

/// Noncompact torus bundle data for `ℝ × SL(2,ℝ)` in the basis
/// `P1, P2, U, T` with `Q = diag(1, 1, -1, -1)`.
pub fn sl2r_torus_witness_data() -> TorusWitnessData {
    let h = sl2r_torus();
    TorusWitnessData {
        algebra: h.carrier().algebra().expect("group").clone(),
        h: Vec::new(),
        t: vec![unit_vec(4, 2), unit_vec(4, 3)],
        b: vec![unit_vec(4, 0), unit_vec(4, 1)],
        q: Matrix::from_ints(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1]),
        metric: Matrix::identity(4),
        j: j_pairs(4),
    }
}

/// Hermitian product of two group structures, block metric and block `J`.
pub fn hermitian_product(a: &HermitianData, b: &HermitianData) -> Result<HermitianData> {
    let (Some(ga), Some(gb)) = (a.carrier().algebra(), b.carrier().algebra()) else {
        return Err(Error::UnsupportedHypothesis("products are formed of group factors only".into()));
    };
    let names: Vec<String> = ga.names().iter().map(|s| format!("{s}_1")).chain(gb.names().iter().map(|s| format!("{s}_2"))).collect();
    let g = direct_sum(ga, gb).with_names(names)?;
    HermitianData::on_algebra(&g, Matrix::block_diag(&[a.g(), b.g()]), Matrix::block_diag(&[a.j(), b.j()]))
}

fn expect(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Builds a catalog entry. `params` is only consulted by `calabi_eckmann`
/// (keys `p`, `q`, `r`, rational strings) and overrides the variant's
/// defaults.
pub fn catalog_build(name: &str, params: &BTreeMap<String, String>) -> Result<CatalogEntry> {
    let mut used = BTreeMap::new();
    let (hermitian, expected) = match name {
        "abelian4" => {
            let g = LieAlgebra::abelian(&["a1", "a2", "a3", "a4"]);
            let h = HermitianData::on_algebra(&g, Matrix::identity(4), j_pairs(4))?;
            let all = [
                ("bas", true),
                ("parallel_torsion", true),
                ("parallel_curvature", true),
                ("pluriclosed", true),
                ("balanced", true),
                ("kahler", true),
            ];
            (h, expect(&all))
        }
        "kodaira4" => (kodaira4(), expect(&[("bas", true), ("pluriclosed", true), ("balanced", false), ("kahler", false)])),
        n if HEISENBERG_LIST.contains(&n) => {
            let alg = heisenberg_list_algebra(n)?;
            (nilpotent_standard(&alg)?, expect(&[("bas", true), ("kahler", false)]))
        }
        "h3C_natural" => (h3c_natural(), expect(&[("bas", false), ("parallel_torsion", false)])),
        "sl2c_canonical" => (sl2c_canonical(), expect(&[("bas", true), ("balanced", true), ("kahler", false)])),
        n if CALABI_ECKMANN_VARIANTS.iter().any(|(v, _)| *v == n) => {
            let (_, (p0, q0, r0)) = CALABI_ECKMANN_VARIANTS.iter().find(|(v, _)| *v == n).unwrap();
            let get = |key: &str, default: i64| -> Result<Scalar> {
                match params.get(key) {
                    Some(s) => s.parse().map_err(|e| shape(format!("parameter {key}: {e}"))),
                    None => Ok(qi(default)),
                }
            };
            let (p, q, r) = (get("p", *p0)?, get("q", *q0)?, get("r", *r0)?);
            used.insert("p".to_string(), p.to_string());
            used.insert("q".to_string(), q.to_string());
            used.insert("r".to_string(), r.to_string());
            let pluriclosed = q.is_zero();
            (calabi_eckmann(&p, &q, &r)?, expect(&[("bas", true), ("pluriclosed", pluriclosed), ("kahler", false)]))
        }
        "h3_x_su2" => (h3_x_su2(), expect(&[("bas", true), ("kahler", false)])),
        "sl2r_torus" => (sl2r_torus(), expect(&[("bas", true), ("kahler", false)])),
        "kodaira4_x_sl2c" => (hermitian_product(&kodaira4(), &sl2c_canonical())?, expect(&[("bas", true), ("kahler", false)])),
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    Ok(CatalogEntry { name: name.to_string(), params: used, hermitian, expected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_and_matches() {
        for name in list() {
            let e = catalog_build(name, &BTreeMap::new()).unwrap();
            let c = e.verify().unwrap();
            assert!(c.ok(), "{name}: {:?}", c.mismatches);
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(catalog_build("nope", &BTreeMap::new()), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn sl2c_metric_is_four_times_identity() {
        assert_eq!(*sl2c_canonical().g(), Matrix::identity(6).scale(&qi(4)));
    }

    #[test]
    fn torus_block_needs_a_square() {
        assert!(torus_block(&qi(2), &qi(0), &qi(1)).is_err());
        let (g, j) = torus_block(&qi(2), &qi(1), &qi(1)).unwrap();
        assert_eq!(j.mul(&j), Matrix::identity(2).neg());
        assert!(j.transpose().mul(&g).mul(&j) == g);
    }
}
