//! Varieties given by homogeneous generators, lines through two rational
//! points, their schematic intersection, a smoothness certificate along the
//! intersection, and a seeded generator of instances with prescribed cycle
//! type.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curvilinear::cycle_type;
use crate::error::{Error, Result};
use crate::exact::parse::parse_multiform;
use crate::exact::{
    fix_chart, fmt_rat, gcd_binforms, parse_rat, rat, rat_one, rat_zero, BinForm, Chart, MultiForm,
    QMat, Rat, UniPoly,
};
use crate::stratify::Partition;

/// Retry bound of [`generate_instance`].
pub const GENERATION_ATTEMPTS: usize = 100;

/// `X = V(F_1, …, F_s) ⊂ P^N` with claimed codimension `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    ambient_dim: usize,
    codim: usize,
    generators: Vec<MultiForm>,
}

impl VarietySpec {
    pub fn new(ambient_dim: usize, codim: usize, generators: Vec<MultiForm>) -> Result<Self> {
        if codim == 0 || codim > ambient_dim {
            return Err(Error::InvalidInput(format!(
                "codimension {codim} out of range for P^{ambient_dim}"
            )));
        }
        if generators.len() < codim {
            return Err(Error::InvalidInput(format!(
                "{} generators cannot cut out codimension {codim}",
                generators.len()
            )));
        }
        for (j, f) in generators.iter().enumerate() {
            if f.nvars() != ambient_dim + 1 {
                return Err(Error::InvalidInput(format!(
                    "generator {j} has {} variables, expected {}",
                    f.nvars(),
                    ambient_dim + 1
                )));
            }
            if f.is_zero() {
                return Err(Error::InvalidInput(format!("generator {j} is zero")));
            }
        }
        Ok(Self { ambient_dim, codim, generators })
    }

    /// Parses generator strings in `x0..xN`.
    pub fn parse(ambient_dim: usize, codim: usize, generators: &[String]) -> Result<Self> {
        let forms = generators
            .iter()
            .map(|g| parse_multiform(g, ambient_dim + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_dim, codim, forms)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn generators(&self) -> &[MultiForm] {
        &self.generators
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarietyJson {
    ambient_dim: usize,
    codim: usize,
    generators: Vec<String>,
}

impl Serialize for VarietySpec {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        VarietyJson {
            ambient_dim: self.ambient_dim,
            codim: self.codim,
            generators: self.generators.iter().map(MultiForm::display).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for VarietySpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = VarietyJson::deserialize(de)?;
        Self::parse(raw.ambient_dim, raw.codim, &raw.generators).map_err(serde::de::Error::custom)
    }
}

/// A rational written in JSON either as an integer or a `"p/q"` string.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    fn value(self) -> std::result::Result<Rat, String> {
        match self {
            RatRepr::Int(n) => Ok(rat(n)),
            RatRepr::Str(s) => parse_rat(&s).ok_or_else(|| format!("'{s}' is not a rational")),
        }
    }
}

/// The line `φ(s, t) = sP + tQ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSpec {
    p: Vec<Rat>,
    q: Vec<Rat>,
}

impl LineSpec {
    pub fn new(p: Vec<Rat>, q: Vec<Rat>) -> Result<Self> {
        if p.len() != q.len() || p.len() < 2 {
            return Err(Error::InvalidInput("line points must have equal length >= 2".into()));
        }
        if QMat::from_rows(p.len(), vec![p.clone(), q.clone()]).rank() < 2 {
            return Err(Error::InvalidInput("line points are linearly dependent".into()));
        }
        Ok(Self { p, q })
    }

    /// `span(e_0, e_1)` in `P^N`.
    pub fn coordinate(ambient_dim: usize) -> Self {
        let e = |i: usize| (0..=ambient_dim).map(|j| if i == j { rat_one() } else { rat_zero() }).collect();
        Self { p: e(0), q: e(1) }
    }

    pub fn p(&self) -> &[Rat] {
        &self.p
    }

    pub fn q(&self) -> &[Rat] {
        &self.q
    }

    pub fn ambient_dim(&self) -> usize {
        self.p.len() - 1
    }

    /// `φ(s, t)`.
    pub fn point(&self, s: &Rat, t: &Rat) -> Vec<Rat> {
        self.p.iter().zip(&self.q).map(|(a, b)| a * s + b * t).collect()
    }

    /// The same line reparametrized by `chart`: `φ'(s, t) = φ(as + bt, cs + dt)`.
    pub fn reframe(&self, chart: &Chart) -> Self {
        let [[a, b], [c, d]] = &chart.0;
        let p = self.p.iter().zip(&self.q).map(|(x, y)| a * x + c * y).collect();
        let q = self.p.iter().zip(&self.q).map(|(x, y)| b * x + d * y).collect();
        Self { p, q }
    }

    /// Standard basis indices completing `P, Q` to a basis, chosen greedily.
    pub fn normal_directions(&self) -> Vec<usize> {
        let n = self.p.len();
        let mut rows = vec![self.p.clone(), self.q.clone()];
        let mut dirs = Vec::new();
        for i in 0..n {
            let mut e = vec![rat_zero(); n];
            e[i] = rat_one();
            rows.push(e);
            if QMat::from_rows(n, rows.clone()).rank() == rows.len() {
                dirs.push(i);
            } else {
                rows.pop();
            }
        }
        dirs
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineJson<T> {
    p: Vec<T>,
    q: Vec<T>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum RatOut {
    Int(i64),
    Str(String),
}

impl RatOut {
    fn of(r: &Rat) -> Self {
        match (r.is_integer(), i64::try_from(r.to_integer())) {
            (true, Ok(n)) => RatOut::Int(n),
            _ => RatOut::Str(fmt_rat(r)),
        }
    }
}

impl Serialize for LineSpec {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        LineJson { p: self.p.iter().map(RatOut::of).collect(), q: self.q.iter().map(RatOut::of).collect() }
            .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LineSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = LineJson::<RatRepr>::deserialize(de)?;
        let conv = |v: Vec<RatRepr>| {
            v.into_iter()
                .map(RatRepr::value)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(serde::de::Error::custom)
        };
        Self::new(conv(raw.p)?, conv(raw.q)?).map_err(serde::de::Error::custom)
    }
}

/// `F(sP + tQ)`.
pub fn restrict_to_line(f: &MultiForm, line: &LineSpec) -> BinForm {
    f.restrict_to_line(line.p(), line.q())
}

/// `Z = X ∩ L` as the gcd `g` of the restrictions, with cofactors
/// `q_j = f_j / g`. All forms are in the line's own parameters; `chart` is a
/// reparametrization under which `g` has no root at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionScheme {
    #[serde(serialize_with = "ser_form")]
    pub g: BinForm,
    pub length: usize,
    pub cycle_type: Partition,
    #[serde(serialize_with = "ser_forms")]
    pub restrictions: Vec<BinForm>,
    #[serde(serialize_with = "ser_forms")]
    pub cofactors: Vec<BinForm>,
    pub chart: Chart,
}

fn ser_form<S: Serializer>(f: &BinForm, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&f.display())
}

fn ser_forms<S: Serializer>(fs: &[BinForm], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(fs.iter().map(BinForm::display))
}

impl IntersectionScheme {
    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Support count `r`.
    pub fn support(&self) -> usize {
        self.cycle_type.blocks()
    }

    /// `gcd(g, q_1, …, q_s) = 1`.
    pub fn cofactors_coprime(&self) -> bool {
        let mut forms = vec![self.g.clone()];
        forms.extend(self.cofactors.iter().cloned());
        gcd_binforms(&forms).is_ok_and(|d| d.degree() == 0)
    }
}

pub fn intersect(x: &VarietySpec, line: &LineSpec) -> Result<IntersectionScheme> {
    if line.ambient_dim() != x.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "line lives in P^{}, variety in P^{}",
            line.ambient_dim(),
            x.ambient_dim()
        )));
    }
    let restrictions: Vec<BinForm> =
        x.generators().iter().map(|f| restrict_to_line(f, line)).collect();
    let g = gcd_binforms(&restrictions).map_err(|_| Error::LineInsideX)?;
    let cofactors = restrictions
        .iter()
        .map(|f| {
            if f.is_zero() {
                BinForm::zero(f.degree().saturating_sub(g.degree()))
            } else {
                f.exact_div(&g).expect("gcd divides every restriction")
            }
        })
        .collect();
    let (_, chart) = fix_chart(&g)?;
    Ok(IntersectionScheme {
        length: g.degree(),
        cycle_type: cycle_type(&g)?,
        g,
        restrictions,
        cofactors,
        chart,
    })
}

/// Sufficient certificate that `X` is smooth of codimension `c` at every
/// point of `Z`: the `c × c` minors of the Jacobian along `L` have no common
/// root with `g`. Minors are reduced modulo `g` in the chart of `Z`.
pub fn smooth_along(x: &VarietySpec, line: &LineSpec, z: &IntersectionScheme) -> bool {
    if z.is_empty() {
        return true;
    }
    let framed = line.reframe(&z.chart);
    let modulus = z.g.change_chart(&z.chart).expect("charts are invertible").dehomogenize();
    let n = x.ambient_dim() + 1;
    let c = x.codim();
    let jac: Vec<Vec<UniPoly>> = x
        .generators()
        .iter()
        .map(|f| {
            (0..n)
                .map(|i| restrict_to_line(&f.partial(i), &framed).dehomogenize().rem(&modulus))
                .collect()
        })
        .collect();
    let mut acc = modulus.clone();
    for rows in subsets(jac.len(), c) {
        for cols in subsets(n, c) {
            let minor = det_mod(&rows, &cols, &jac, &modulus);
            acc = acc.gcd(&minor);
            if acc.degree() == Some(0) {
                return true;
            }
        }
    }
    false
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant of the selected submatrix by cofactor expansion, modulo `m`.
fn det_mod(rows: &[usize], cols: &[usize], a: &[Vec<UniPoly>], m: &UniPoly) -> UniPoly {
    if rows.len() == 1 {
        return a[rows[0]][cols[0]].clone();
    }
    let mut acc = UniPoly::zero();
    for (k, &col) in cols.iter().enumerate() {
        let entry = &a[rows[0]][col];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
        let sub = det_mod(&rows[1..], &rest, a, m);
        let term = (entry * &sub).rem(m);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// A generated `(X, L, Z)` with the roots of `g` known by construction.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratedInstance {
    pub variety: VarietySpec,
    pub line: LineSpec,
    pub scheme: IntersectionScheme,
    /// `(root, multiplicity)`: `g = Π (t - root·s)^mult` up to scalar.
    #[serde(serialize_with = "ser_roots")]
    pub roots: Vec<(Rat, usize)>,
    pub attempts: usize,
}

fn ser_roots<S: Serializer>(roots: &[(Rat, usize)], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(roots.iter().map(|(r, m)| (fmt_rat(r), *m)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRequest {
    pub ambient_dim: usize,
    pub codim: usize,
    pub degrees: Vec<usize>,
    pub cycle_type: Partition,
    pub seed: u64,
}

/// Random binary form of the given degree in `x0, x1` as exponent terms.
fn binary_terms(coeffs: &[Rat], nvars: usize, extra: &[u32]) -> Vec<(Vec<u32>, Rat)> {
    let d = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut e = vec![0u32; nvars];
            e[0] = (d - i) as u32;
            e[1] = i as u32;
            for (slot, x) in e.iter_mut().zip(extra) {
                *slot += x;
            }
            (e, c.clone())
        })
        .collect()
}

fn random_coeffs(rng: &mut ChaCha8Rng, degree: usize) -> Vec<Rat> {
    (0..=degree).map(|_| rat(rng.gen_range(-20..=20))).collect()
}

/// Builds `X` with `L = span(e_0, e_1)` and `X ∩ L` of cycle type exactly
/// `target`, by rejection sampling. Each `F_j` is `g·R_j` (omitted when
/// `deg F_j < k`) plus terms linear and quadratic in the normal variables.
pub fn generate_instance(req: &GeneratorRequest) -> Result<GeneratedInstance> {
    let GeneratorRequest { ambient_dim: n, codim: c, ref degrees, cycle_type: ref target, seed } = *req;
    let k = target.weight();
    if c == 0 || degrees.len() != c {
        return Err(Error::Precondition(format!("need {c} degrees, got {}", degrees.len())));
    }
    if n <= c {
        return Err(Error::Precondition(format!("need N > c, got N={n}, c={c}")));
    }
    if degrees.contains(&0) {
        return Err(Error::Precondition("degrees must be positive".into()));
    }
    // generators of degree below k vanish on L; the others restrict to g·R_j
    let carriers: Vec<usize> = degrees.iter().copied().filter(|&d| d >= k).collect();
    let feasible = match carriers.as_slice() {
        [] => false,
        [only] => *only == k,
        _ => true,
    };
    if k == 0 || !feasible {
        return Err(Error::Precondition(format!(
            "no line meets generators of degrees {degrees:?} in a scheme of length {k}: \
             need two degrees >= {k}, or exactly one equal to {k}"
        )));
    }
    let nvars = n + 1;
    let line = LineSpec::coordinate(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reason = String::new();
    for attempt in 1..=GENERATION_ATTEMPTS {
        let roots = random_roots(&mut rng, target.parts());
        // integral g = Π (q t - p s)^m
        let g = roots.iter().fold(BinForm::one(), |acc, (r, m)| {
            let lin = BinForm::linear(-rat_from_numer(r), rat_from_denom(r));
            acc.mul(&lin.pow(*m))
        });
        let mut gens = Vec::with_capacity(c);
        for &deg in degrees {
            let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
            let mut push = |ts: Vec<(Vec<u32>, Rat)>| {
                for (e, v) in ts {
                    *terms.entry(e).or_insert_with(rat_zero) += v;
                }
            };
            if deg >= k {
                let r = BinForm::new(random_coeffs(&mut rng, deg - k));
                push(binary_terms(g.mul(&r).coeffs(), nvars, &[]));
            }
            for i in 2..nvars {
                let mut extra = vec![0u32; nvars];
                extra[i] = 1;
                push(binary_terms(&random_coeffs(&mut rng, deg - 1), nvars, &extra));
            }
            if deg >= 2 {
                for _ in 0..2 {
                    let a = rng.gen_range(2..nvars);
                    let b = rng.gen_range(2..nvars);
                    let mut extra = vec![0u32; nvars];
                    extra[a] += 1;
                    extra[b] += 1;
                    let mut mono = vec![rat_zero(); deg - 1];
                    let slot = rng.gen_range(0..deg - 1);
                    mono[slot] = rat(rng.gen_range(-20..=20));
                    push(binary_terms(&mono, nvars, &extra));
                }
            }
            let form = MultiForm::from_terms(nvars, deg, terms)?;
            if form.is_zero() {
                reason = "a generator came out zero".into();
                continue;
            }
            gens.push(form);
        }
        if gens.len() != c {
            continue;
        }
        let variety = VarietySpec::new(n, c, gens)?;
        let scheme = intersect(&variety, &line)?;
        if !scheme.g.associated(&g) {
            reason = "gcd of restrictions exceeds the target".into();
            continue;
        }
        if !scheme.cofactors_coprime() {
            reason = "cofactors share a root with g".into();
            continue;
        }
        if !smooth_along(&variety, &line, &scheme) {
            reason = "smoothness along Z not certified".into();
            continue;
        }
        return Ok(GeneratedInstance { variety, line, scheme, roots, attempts: attempt });
    }
    Err(Error::GenerationFailed { attempts: GENERATION_ATTEMPTS, reason })
}

fn rat_from_numer(r: &Rat) -> Rat {
    Rat::from_integer(r.numer().clone())
}

fn rat_from_denom(r: &Rat) -> Rat {
    Rat::from_integer(r.denom().clone())
}

/// Distinct roots `p/q` with `p ∈ [-9, 9]`, `q ∈ {1, 2, 3}`, one per part.
fn random_roots(rng: &mut ChaCha8Rng, parts: &[usize]) -> Vec<(Rat, usize)> {
    let mut pool: Vec<Rat> = Vec::new();
    for q in 1..=3i64 {
        for p in -9..=9i64 {
            let r = Rat::new(p.into(), q.into());
            if !pool.contains(&r) {
                pool.push(r);
            }
        }
    }
    pool.shuffle(rng);
    pool.into_iter().zip(parts.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn q_and_quartic() -> VarietySpec {
        VarietySpec::parse(
            4,
            2,
            &["x0*x2 + x1*x3 + x4^2".into(), "x1^4 - 5*x0^2*x1^2 + 4*x0^4 + x0^3*x4".into()],
        )
        .unwrap()
    }

    #[test]
    fn restriction_examples() {
        let x = q_and_quartic();
        let l23 = LineSpec::new(
            vec![rat(0), rat(0), rat(1), rat(0), rat(0)],
            vec![rat(0), rat(0), rat(0), rat(1), rat(0)],
        )
        .unwrap();
        assert!(restrict_to_line(&x.generators()[0], &l23).is_zero());
        let l01 = LineSpec::coordinate(4);
        assert!(restrict_to_line(&x.generators()[0], &l01).is_zero());
        let sq = parse_multiform("x0^2", 5).unwrap();
        assert_eq!(restrict_to_line(&sq, &l01), BinForm::from_ints(&[1, 0, 0]));
    }

    #[test]
    fn quadric_line_intersection_is_the_quartic() {
        let z = intersect(&q_and_quartic(), &LineSpec::coordinate(4)).unwrap();
        assert_eq!(z.length, 4);
        assert_eq!(z.cycle_type, Partition::ones(4));
        assert!(z.cofactors[0].is_zero());
        assert!(smooth_along(&q_and_quartic(), &LineSpec::coordinate(4), &z));
    }

    #[test]
    fn hypersurface_bezout() {
        let x = VarietySpec::parse(3, 1, &["x0^3 + x1^3 + x2^3 + x3^3".into()]).unwrap();
        let line = LineSpec::new(
            vec![rat(1), rat(2), rat(0), rat(-1)],
            vec![rat(0), rat(1), rat(3), ratio(1, 2)],
        )
        .unwrap();
        let z = intersect(&x, &line).unwrap();
        assert_eq!(z.length, 3);
    }

    #[test]
    fn disjoint_line_is_empty() {
        let x = VarietySpec::parse(3, 2, &["x2".into(), "x3".into()]).unwrap();
        let line = LineSpec::new(
            vec![rat(0), rat(0), rat(1), rat(0)],
            vec![rat(0), rat(0), rat(0), rat(1)],
        )
        .unwrap();
        let z = intersect(&x, &line).unwrap();
        assert!(z.is_empty());
        assert_eq!(z.cycle_type, Partition::empty());
        assert!(smooth_along(&x, &line, &z));
    }

    #[test]
    fn line_inside_is_rejected() {
        let x = VarietySpec::parse(3, 2, &["x2".into(), "x3".into()]).unwrap();
        assert_eq!(intersect(&x, &LineSpec::coordinate(3)), Err(Error::LineInsideX));
    }

    #[test]
    fn cone_vertex_on_line_is_not_certified() {
        // the quadric cone x1*x2 - x3^2 has its vertex (1:0:0:0) on L
        let x = VarietySpec::parse(3, 1, &["x1*x2 - x3^2 + x1^2".into()]).unwrap();
        let line = LineSpec::coordinate(3);
        let z = intersect(&x, &line).unwrap();
        assert_eq!(z.length, 2);
        assert!(!smooth_along(&x, &line, &z));
    }

    #[test]
    fn generic_hypersurface_is_certified() {
        let x = VarietySpec::parse(3, 1, &["x0*x1*(x1 - x0) + x2*x0^2 + x3*x1^2".into()]).unwrap();
        let line = LineSpec::coordinate(3);
        let z = intersect(&x, &line).unwrap();
        assert_eq!(z.cycle_type, Partition::ones(3));
        assert!(smooth_along(&x, &line, &z));
    }

    #[test]
    fn generator_hits_target() {
        let req = GeneratorRequest {
            ambient_dim: 4,
            codim: 2,
            degrees: vec![3, 4],
            cycle_type: Partition::new(vec![2, 1]).unwrap(),
            seed: 7,
        };
        let inst = generate_instance(&req).unwrap();
        assert_eq!(inst.scheme.length, 3);
        assert_eq!(inst.scheme.cycle_type, req.cycle_type);
        assert!(inst.scheme.cofactors_coprime());
        assert!(smooth_along(&inst.variety, &inst.line, &inst.scheme));
        let again = generate_instance(&req).unwrap();
        assert_eq!(inst.variety, again.variety);
    }

    #[test]
    fn generator_rejects_heavy_targets() {
        let req = GeneratorRequest {
            ambient_dim: 4,
            codim: 2,
            degrees: vec![2, 4],
            cycle_type: Partition::new(vec![9]).unwrap(),
            seed: 1,
        };
        assert!(matches!(generate_instance(&req), Err(Error::Precondition(_))));
        // a quadric restricting to zero leaves the quartic alone, so length 3 is out of reach
        let req = GeneratorRequest { cycle_type: Partition::new(vec![2, 1]).unwrap(), ..req };
        assert!(matches!(generate_instance(&req), Err(Error::Precondition(_))));
        let req = GeneratorRequest { degrees: vec![2, 3], ..req };
        assert_eq!(generate_instance(&req).unwrap().scheme.length, 3);
    }

    #[test]
    fn json_round_trip() {
        let x = q_and_quartic();
        let s = serde_json::to_string(&x).unwrap();
        let back: VarietySpec = serde_json::from_str(&s).unwrap();
        assert_eq!(x, back);
        let l: LineSpec = serde_json::from_str(r#"{"p": [1, 0, "1/2", 0, 0], "q": ["0", 1, 0, 0, 0]}"#).unwrap();
        assert_eq!(l.p()[2], ratio(1, 2));
        assert!(serde_json::from_str::<LineSpec>(r#"{"p": [1, 0], "q": [2, 0]}"#).is_err());
        assert!(serde_json::from_str::<LineSpec>(r#"{"p": [1, 0], "q": [0, 1], "r": []}"#).is_err());
    }
}
