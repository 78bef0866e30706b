//! The JSON algebra document: a basis, sparse brackets, a metric and a
//! complex structure, with optional isotropy and `𝔨`-nilpotent blocks.
//!
//! Rationals are strings `"p/q"` or `"p"`. Matrices are row-major lists of
//! rows, except `J`, which lists the images of the basis vectors. Bracket
//! lists hold each unordered pair once; antisymmetry is implied.

use std::collections::BTreeMap;

use bas_core::algebra::LieAlgebra;
use bas_core::constructions::knil::KNilpotentSpec;
use bas_core::hermitian::{Carrier, CarrierSource, HermitianData};
use bas_core::homogeneous::ReductivePair;
use bas_core::linalg::{unit_vec, Matrix, Vector};
use bas_core::{Error, Result, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotropy: Option<IsotropyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_nilpotent: Option<KNilpotentBlock>,
}

/// `[x, y] = Σ value[name] · name`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub x: String,
    pub y: String,
    pub value: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Named(String),
    Matrix(Vec<Vec<String>>),
}

/// A reductive pair: the ambient algebra `l` with its own basis and
/// brackets, and frames of `u` and `m` in `l` coordinates. The top-level
/// basis names the `m` frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyBlock {
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    pub u: Vec<Vec<String>>,
    pub m: Vec<Vec<String>>,
}

/// A `𝔨`-nilpotent spec. `k_brackets` names the `𝔨` basis `k1, k2, ...`;
/// in the document basis the centre comes first, then `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KNilpotentBlock {
    pub k_dim: usize,
    #[serde(default)]
    pub k_brackets: Vec<BracketEntry>,
    pub k_metric: Vec<Vec<String>>,
    pub v_dim_complex: usize,
    pub v_metric: Vec<Vec<String>>,
    pub i: Vec<Vec<String>>,
    pub reps: Vec<Vec<Vec<String>>>,
}

/// What a document describes once validated.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub carrier: Carrier,
    pub metric: Option<Matrix>,
    pub j: Option<Matrix>,
    pub k_nilpotent: Option<KNilpotentSpec>,
}

impl Parsed {
    pub fn algebra(&self) -> Option<&LieAlgebra> {
        self.carrier.algebra()
    }

    pub fn hermitian(&self) -> Result<HermitianData> {
        let (Some(g), Some(j)) = (&self.metric, &self.j) else {
            return Err(parse_err("metric/J", "a Hermitian structure needs both a metric and J"));
        };
        HermitianData::new(self.carrier.clone(), g.clone(), j.clone())
    }
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

fn rational(s: &str, at: &str) -> Result<Scalar> {
    s.trim().parse::<Scalar>().map_err(|_| parse_err(at, format!("{s:?} is not a rational literal")))
}

fn vector(v: &[String], n: usize, at: &str) -> Result<Vector> {
    if v.len() != n {
        return Err(parse_err(at, format!("expected {n} entries, got {}", v.len())));
    }
    v.iter().enumerate().map(|(i, s)| rational(s, &format!("{at}[{i}]"))).collect()
}

fn matrix(rows: &[Vec<String>], r: usize, c: usize, at: &str) -> Result<Matrix> {
    if rows.len() != r {
        return Err(parse_err(at, format!("expected {r} rows, got {}", rows.len())));
    }
    let rows: Vec<Vector> = rows.iter().enumerate().map(|(i, row)| vector(row, c, &format!("{at}[{i}]"))).collect::<Result<_>>()?;
    if r == 0 {
        return Ok(Matrix::zeros(0, c));
    }
    Matrix::from_rows(&rows)
}

fn structure_constants(names: &[String], brackets: &[BracketEntry], at: &str) -> Result<Vec<Scalar>> {
    let n = names.len();
    let index = |s: &str, loc: &str| names.iter().position(|x| x == s).ok_or_else(|| parse_err(loc, format!("unknown basis element {s:?}")));
    let mut c = vec![Scalar::zero(); n * n * n];
    let mut seen = std::collections::BTreeSet::new();
    for (e, b) in brackets.iter().enumerate() {
        let loc = format!("{at}[{e}]");
        let (i, j) = (index(&b.x, &format!("{loc}.x"))?, index(&b.y, &format!("{loc}.y"))?);
        if i == j {
            return Err(parse_err(loc, "bracket of an element with itself"));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(parse_err(loc, format!("pair ({}, {}) listed twice", b.x, b.y)));
        }
        for (k, v) in &b.value {
            let kk = index(k, &format!("{loc}.value"))?;
            let v = rational(v, &format!("{loc}.value.{k}"))?;
            c[kk * n * n + i * n + j] += &v;
            c[kk * n * n + j * n + i] -= &v;
        }
    }
    Ok(c)
}

fn check_names(names: &[String], at: &str) -> Result<()> {
    let distinct: std::collections::BTreeSet<&String> = names.iter().collect();
    if distinct.len() != names.len() {
        return Err(parse_err(at, "basis names must be distinct"));
    }
    Ok(())
}

impl AlgebraDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Validates the document and builds the algebra or pair it describes.
    pub fn parse(&self) -> Result<Parsed> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(parse_err("basis", format!("dim is {n} but {} names are given", self.basis.len())));
        }
        check_names(&self.basis, "basis")?;
        let k_nilpotent = self.k_nilpotent.as_ref().map(|k| k.parse(n)).transpose()?;
        let carrier = match &self.isotropy {
            None => {
                let names = self.basis.clone();
                let alg = match &k_nilpotent {
                    Some(spec) if self.brackets.is_empty() => {
                        bas_core::constructions::build_k_nilpotent(spec)?.algebra.with_names(names)?
                    }
                    _ => LieAlgebra::new(names, structure_constants(&self.basis, &self.brackets, "brackets")?)?,
                };
                Carrier::from_algebra(&alg)
            }
            Some(iso) => {
                if !self.brackets.is_empty() {
                    return Err(parse_err("brackets", "with an isotropy block the brackets belong to isotropy.brackets"));
                }
                check_names(&iso.basis, "isotropy.basis")?;
                let d = iso.basis.len();
                let l = LieAlgebra::new(iso.basis.clone(), structure_constants(&iso.basis, &iso.brackets, "isotropy.brackets")?)?;
                let u = iso.u.iter().enumerate().map(|(i, v)| vector(v, d, &format!("isotropy.u[{i}]"))).collect::<Result<Vec<_>>>()?;
                let m = iso.m.iter().enumerate().map(|(i, v)| vector(v, d, &format!("isotropy.m[{i}]"))).collect::<Result<Vec<_>>>()?;
                if m.len() != n {
                    return Err(parse_err("isotropy.m", format!("expected {n} frame vectors, got {}", m.len())));
                }
                Carrier::from_pair(&ReductivePair::new_allowing_kernel(l, u, m, self.basis.clone())?)
            }
        };
        let metric = match &self.metric {
            None => None,
            Some(MetricSpec::Named(s)) if s == "identity" => Some(Matrix::identity(n)),
            Some(MetricSpec::Named(s)) => return Err(parse_err("metric", format!("unknown metric {s:?}; use \"identity\" or a matrix"))),
            Some(MetricSpec::Matrix(rows)) => Some(matrix(rows, n, n, "metric")?),
        };
        let j = match &self.j {
            None => None,
            Some(cols) => {
                if cols.len() != n {
                    return Err(parse_err("J", format!("expected {n} images, got {}", cols.len())));
                }
                let cols: Vec<Vector> = cols.iter().enumerate().map(|(i, c)| vector(c, n, &format!("J[{i}]"))).collect::<Result<_>>()?;
                Some(Matrix::from_cols(n, &cols))
            }
        };
        Ok(Parsed { carrier, metric, j, k_nilpotent })
    }

    /// The document of a Hermitian structure on a group or a pair.
    pub fn from_hermitian(name: Option<&str>, h: &HermitianData) -> Self {
        let c = h.carrier();
        let n = c.dim();
        let g = h.g();
        let metric = if *g == Matrix::identity(n) { MetricSpec::Named("identity".into()) } else { MetricSpec::Matrix(rows_of(g)) };
        let j = (0..n).map(|a| strings(&h.j().col(a))).collect();
        let (brackets, isotropy) = match c.source() {
            CarrierSource::Algebra(l) => (sparse_brackets(l), None),
            CarrierSource::Pair(p) => {
                let d = p.l().dim();
                let block = IsotropyBlock {
                    basis: p.l().names().to_vec(),
                    brackets: sparse_brackets(p.l()),
                    u: p.u().basis().iter().map(|v| strings(v)).collect(),
                    m: (0..p.dim_m()).map(|a| strings(&p.m_vec(&unit_vec(p.dim_m(), a)))).collect(),
                };
                debug_assert!(block.m.iter().all(|v| v.len() == d));
                (Vec::new(), Some(block))
            }
        };
        AlgebraDocument {
            name: name.map(str::to_string),
            dim: n,
            basis: c.names().to_vec(),
            brackets,
            metric: Some(metric),
            j: Some(j),
            isotropy,
            k_nilpotent: None,
        }
    }
}

impl KNilpotentBlock {
    fn parse(&self, n: usize) -> Result<KNilpotentSpec> {
        let k = self.k_dim;
        let v = 2 * self.v_dim_complex;
        if k + v != n {
            return Err(parse_err("k_nilpotent", format!("k_dim + 2 v_dim_complex = {} but dim is {n}", k + v)));
        }
        let knames: Vec<String> = (0..k).map(|a| format!("k{}", a + 1)).collect();
        let k_bracket = structure_constants(&knames, &self.k_brackets, "k_nilpotent.k_brackets")?;
        Ok(KNilpotentSpec {
            k_dim: k,
            k_bracket,
            k_metric: matrix(&self.k_metric, k, k, "k_nilpotent.k_metric")?,
            v_dim_complex: self.v_dim_complex,
            v_metric: matrix(&self.v_metric, v, v, "k_nilpotent.v_metric")?,
            i: matrix(&self.i, v, v, "k_nilpotent.i")?,
            reps: self
                .reps
                .iter()
                .enumerate()
                .map(|(a, r)| matrix(r, v, v, &format!("k_nilpotent.reps[{a}]")))
                .collect::<Result<_>>()?,
        })
    }

    pub fn from_spec(spec: &KNilpotentSpec) -> Self {
        let k = spec.k_dim;
        let names: Vec<String> = (0..k).map(|a| format!("k{}", a + 1)).collect();
        let kalg = LieAlgebra::new(names, spec.k_bracket.clone()).expect("spec bracket is a Lie bracket");
        KNilpotentBlock {
            k_dim: k,
            k_brackets: sparse_brackets(&kalg),
            k_metric: rows_of(&spec.k_metric),
            v_dim_complex: spec.v_dim_complex,
            v_metric: rows_of(&spec.v_metric),
            i: rows_of(&spec.i),
            reps: spec.reps.iter().map(rows_of).collect(),
        }
    }
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn rows_of(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect()).collect()
}

fn sparse_brackets(l: &LieAlgebra) -> Vec<BracketEntry> {
    let n = l.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let value: BTreeMap<String, String> = (0..n)
                .filter(|&k| !l.c(k, i, j).is_zero())
                .map(|k| (l.name(k).to_string(), l.c(k, i, j).to_string()))
                .collect();
            if !value.is_empty() {
                out.push(BracketEntry { x: l.name(i).to_string(), y: l.name(j).to_string(), value });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bas_core::constructions::catalog::kodaira4;

    #[test]
    fn kodaira_round_trip() {
        let doc = AlgebraDocument::from_hermitian(Some("kodaira4"), &kodaira4());
        let text = doc.to_json();
        let back = AlgebraDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let h = back.parse().unwrap().hermitian().unwrap();
        assert_eq!(h.j(), kodaira4().j());
    }

    #[test]
    fn jacobi_failure_names_the_triple() {
        let text = r#"{"dim": 3, "basis": ["a","b","c"],
            "brackets": [{"x":"a","y":"b","value":{"a":"1"}}, {"x":"b","y":"c","value":{"c":"1"}}, {"x":"a","y":"c","value":{"a":"1"}}]}"#;
        let err = AlgebraDocument::from_json(text).unwrap().parse().unwrap_err();
        assert!(matches!(err, Error::NotALieAlgebra { .. }), "{err}");
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = AlgebraDocument::from_json("{\n \"dim\": 2,\n \"basis\": [\"a\" \"b\"]\n}").unwrap_err();
        let Error::Parse { location, .. } = err else { panic!() };
        assert!(location.starts_with("line 3"), "{location}");
    }

    #[test]
    fn bad_rational_is_located() {
        let text = r#"{"dim": 2, "basis": ["a","b"], "brackets": [{"x":"a","y":"b","value":{"a":"1.5"}}]}"#;
        let err = AlgebraDocument::from_json(text).unwrap().parse().unwrap_err();
        let Error::Parse { location, .. } = err else { panic!("{err}") };
        assert_eq!(location, "brackets[0].value.a");
    }
}
