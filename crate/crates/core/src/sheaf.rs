//! Secant and contact sheaves of a line `L` relative to a marked subscheme
//! `W ⊂ Z = X ∩ L`, computed through exact linear condition systems.
//!
//! At twist `t` the unknowns are a normal field `v = (v_1, …, v_(N-1))`,
//! each `v_i` a binary form of degree `1 + t`, and a residue `b` modulo `w`.
//! The conditions are `h_j(v) ≡ u_j b (mod w)` with `u_j = f_j / w` and
//! `h_j(v) = Σ_i (∂F_j/∂x_i)(φ) v_i`; contact adds `M(w) | b`. Everything
//! is dehomogenized in a chart where `w` has no root at infinity, so residues
//! live in `Q[t]/(w̃)` with monomial basis `1, t, …, t^(d-1)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvilinear::{cycle_type, multiple_part, squarefree_part};
use crate::error::{Error, Result};
use crate::exact::parse::parse_binform;
use crate::exact::{fmt_rat, gcd_binforms, rat_one, rat_zero, BinForm, QMat, Rat, UniPoly};
use crate::incidence::{intersect, smooth_along, IntersectionScheme, LineSpec, VarietySpec};
use crate::stratify::{expected_dim_secant, Partition, SecantFamilyParams};

/// How `W ⊂ Z` is chosen. Absent means `W = Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MarkedSpec {
    /// `w` as a binary form in the line's parameters `s, t`.
    Divisor(String),
    /// Multiplicities capped: `Π q_i^min(m_i, e)`.
    Cap(usize),
    /// Multiplicities lowered: `Π q_i^max(m_i - j, 0)`.
    ReduceBy(usize),
}

/// `W = V(w)` with `w | g`, plus the per-point excess data that the
/// predictions need, all computed without factoring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSubscheme {
    w: BinForm,
    cycle_type: Partition,
    /// `Σ min(d_i, k_i - d_i) = deg gcd(w, g/w)`.
    overlap: usize,
    /// `#supp W`.
    support: usize,
    /// Points of `W` with `d_i = k_i`.
    saturated: usize,
    whole: bool,
}

impl MarkedSubscheme {
    pub fn whole(z: &IntersectionScheme) -> Result<Self> {
        Self::from_divisor(z, z.g.clone())
    }

    pub fn from_divisor(z: &IntersectionScheme, w: BinForm) -> Result<Self> {
        if w.is_zero() {
            return Err(Error::NotASubscheme);
        }
        let Some(rest) = z.g.exact_div(&w) else {
            return Err(Error::NotASubscheme);
        };
        let w = w.normalized();
        let radical = squarefree_part(&w)?;
        let overlap = gcd_binforms(&[w.clone(), rest.clone()])?.degree();
        let support = radical.degree();
        let shared = gcd_binforms(&[radical, rest.clone()])?.degree();
        Ok(Self {
            cycle_type: cycle_type(&w)?,
            overlap,
            support,
            saturated: support - shared,
            whole: rest.degree() == 0,
            w,
        })
    }

    pub fn from_spec(z: &IntersectionScheme, spec: Option<&MarkedSpec>) -> Result<Self> {
        let Some(spec) = spec else {
            return Self::whole(z);
        };
        let layered = |f: &dyn Fn(usize) -> usize| -> Result<BinForm> {
            let dec = crate::exact::squarefree_decomposition(&z.g)?;
            Ok(dec
                .factors
                .iter()
                .fold(BinForm::one(), |acc, (m, q)| acc.mul(&q.pow(f(*m)))))
        };
        let w = match spec {
            MarkedSpec::Divisor(src) => parse_binform(src)?,
            MarkedSpec::Cap(e) => layered(&|m| m.min(*e))?,
            MarkedSpec::ReduceBy(j) => layered(&|m| m.saturating_sub(*j))?,
        };
        Self::from_divisor(z, w)
    }

    pub fn equation(&self) -> &BinForm {
        &self.w
    }

    pub fn degree(&self) -> usize {
        self.w.degree()
    }

    pub fn cycle_type(&self) -> &Partition {
        &self.cycle_type
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn saturated(&self) -> usize {
        self.saturated
    }

    pub fn is_whole(&self) -> bool {
        self.whole
    }
}

/// Everything about `(X, L, Z, W)` the condition systems need, expressed in
/// the chart of `Z`.
#[derive(Clone, Debug)]
pub struct SheafContext {
    pub variety: VarietySpec,
    pub line: LineSpec,
    pub scheme: IntersectionScheme,
    pub marked: MarkedSubscheme,
    /// The line reparametrized so that `g` has no root at infinity.
    pub frame: LineSpec,
    /// `w̃`, `M̃(w)` and `g̃` in the frame.
    modulus: UniPoly,
    mult: UniPoly,
    g_frame: UniPoly,
    /// `ũ_j mod w̃`.
    u: Vec<UniPoly>,
    /// `(∂F_j/∂x_(dir_i))(φ) mod w̃`, indexed `[j][i]`.
    normal: Vec<Vec<UniPoly>>,
}

impl SheafContext {
    pub fn new(x: &VarietySpec, line: &LineSpec, marked: Option<&MarkedSpec>) -> Result<Self> {
        let z = intersect(x, line)?;
        if z.is_empty() {
            return Err(Error::Precondition("L does not meet X".into()));
        }
        let w = MarkedSubscheme::from_spec(&z, marked)?;
        Self::with_marked(x, line, z, w)
    }

    pub fn with_marked(
        x: &VarietySpec,
        line: &LineSpec,
        z: IntersectionScheme,
        w: MarkedSubscheme,
    ) -> Result<Self> {
        let chart = &z.chart;
        let frame = line.reframe(chart);
        let modulus = w.equation().change_chart(chart)?.dehomogenize();
        let mult = multiple_part(&w.equation().change_chart(chart)?)?.dehomogenize();
        let g_frame = z.g.change_chart(chart)?.dehomogenize();
        let reduce = |p: UniPoly| p.rem(&modulus);
        let u = z
            .restrictions
            .iter()
            .map(|f| {
                let f = f.change_chart(chart)?.dehomogenize();
                let q = f.exact_div(&modulus).ok_or(Error::NotASubscheme)?;
                Ok(reduce(q))
            })
            .collect::<Result<Vec<_>>>()?;
        let dirs = frame.normal_directions();
        let normal = x
            .generators()
            .iter()
            .map(|f| {
                dirs.iter()
                    .map(|&i| reduce(f.partial(i).restrict_to_line(frame.p(), frame.q()).dehomogenize()))
                    .collect()
            })
            .collect();
        Ok(Self {
            variety: x.clone(),
            line: line.clone(),
            scheme: z,
            marked: w,
            frame,
            modulus,
            mult,
            g_frame,
            u,
            normal,
        })
    }

    /// `N - 1`, the rank of the normal bundle.
    pub fn normal_rank(&self) -> usize {
        self.variety.ambient_dim() - 1
    }

    fn d(&self) -> usize {
        self.marked.degree()
    }

    /// Coefficients `0..d` of `p mod w̃`.
    fn residue(&self, p: &UniPoly) -> Vec<Rat> {
        let r = p.rem(&self.modulus);
        (0..self.d()).map(|i| r.coeff(i)).collect()
    }

    fn times_t(&self, p: &UniPoly) -> UniPoly {
        (p * &UniPoly::monomial(rat_one(), 1)).rem(&self.modulus)
    }
}

/// The linear system at one twist. Columns: `v_(i,e)` (coefficient of
/// `t^e` in `v_i`, `i`-major), then `b_0 … b_(d-1)`.
#[derive(Clone, Debug)]
pub struct ConditionSystem {
    pub twist: i64,
    pub contact: bool,
    pub v_unknowns: usize,
    pub b_unknowns: usize,
    pub matrix: QMat,
}

/// Knobs that do not change the mathematics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Wipes the first constraint row, to prove the checks are live.
    pub inject_fault: bool,
}

pub fn build_system(ctx: &SheafContext, contact: bool, twist: i64, opts: BuildOptions) -> ConditionSystem {
    let nn = ctx.normal_rank();
    let d = ctx.d();
    let per = if twist >= -1 { (twist + 2) as usize } else { 0 };
    let nv = nn * per;
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(nv + d);
    let jn = ctx.normal.len();
    for i in 0..nn {
        let mut powers: Vec<UniPoly> = ctx.normal.iter().map(|row| row[i].clone()).collect();
        for _ in 0..per {
            let mut col = Vec::with_capacity(jn * d);
            for p in &powers {
                col.extend(ctx.residue(p));
            }
            if contact {
                col.extend(std::iter::repeat_n(rat_zero(), ctx.mult.degree().unwrap_or(0)));
            }
            columns.push(col);
            powers = powers.iter().map(|p| ctx.times_t(p)).collect();
        }
    }
    let mut tm = UniPoly::one();
    for _ in 0..d {
        let mut col = Vec::with_capacity(jn * d);
        for u in &ctx.u {
            col.extend(ctx.residue(&-&(u * &tm)));
        }
        if contact {
            let r = tm.rem(&ctx.mult);
            col.extend((0..ctx.mult.degree().unwrap_or(0)).map(|i| r.coeff(i)));
        }
        columns.push(col);
        tm = ctx.times_t(&tm);
    }
    let rows = jn * d + if contact { ctx.mult.degree().unwrap_or(0) } else { 0 };
    let mut matrix = QMat::from_columns(rows, &columns);
    if opts.inject_fault && rows > 0 {
        for j in 0..matrix.cols() {
            matrix[(0, j)] = rat_zero();
        }
    }
    ConditionSystem { twist, contact, v_unknowns: nv, b_unknowns: d, matrix }
}

impl ConditionSystem {
    /// `h⁰` of the kernel sheaf: all `(v, b)` solutions.
    pub fn h0_kernel(&self) -> usize {
        self.matrix.cols() - self.matrix.rank()
    }

    /// Solutions with `v = 0`.
    pub fn b_kernel(&self) -> usize {
        let cols: Vec<usize> = (self.v_unknowns..self.matrix.cols()).collect();
        self.b_unknowns - self.matrix.select_columns(&cols).rank()
    }

    /// `h⁰` of the image subsheaf of `N_L(t)`: the projection to `v`.
    pub fn h0_image(&self) -> usize {
        self.h0_kernel() - self.b_kernel()
    }

    /// Basis of the `v`-parts of all solutions (may be dependent).
    pub fn v_solutions(&self) -> Vec<Vec<Rat>> {
        self.matrix
            .kernel()
            .into_iter()
            .map(|mut s| {
                s.truncate(self.v_unknowns);
                s
            })
            .collect()
    }
}

fn h0_image_at(ctx: &SheafContext, contact: bool, twist: i64, opts: BuildOptions) -> usize {
    build_system(ctx, contact, twist, opts).h0_image()
}

/// Twist at which the colength is read off: `max(d - 1, 0)`.
pub fn stable_twist(ctx: &SheafContext) -> i64 {
    (ctx.d() as i64 - 1).max(0)
}

/// `ℓ(N_L / image)` at the stable twist, confirmed one twist higher.
pub fn colength(ctx: &SheafContext, contact: bool, opts: BuildOptions) -> Result<usize> {
    let nn = ctx.normal_rank() as i64;
    let t = stable_twist(ctx);
    let at = |tw: i64| nn * (tw + 2) - h0_image_at(ctx, contact, tw, opts) as i64;
    let (low, high) = (at(t), at(t + 1));
    if low != high || low < 0 {
        return Err(Error::NotStabilized { twist: t, low, high });
    }
    Ok(low as usize)
}

/// Splitting type `{a_i}` of the image sheaf, largest first, together with
/// the `h⁰` values it was recovered from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub degrees: Vec<i64>,
    pub h0: BTreeMap<i64, usize>,
}

impl Splitting {
    pub fn h0_at(degrees: &[i64], twist: i64) -> usize {
        degrees.iter().map(|a| (a + twist + 1).max(0) as usize).sum()
    }

    pub fn h1_at(degrees: &[i64], twist: i64) -> usize {
        degrees.iter().map(|a| (-a - twist - 1).max(0) as usize).sum()
    }

    pub fn nonnegative(&self) -> bool {
        self.degrees.iter().all(|&a| a >= 0)
    }
}

/// Recovers `#{a_i ≥ -t} = h⁰(t) - h⁰(t-1)` for `t = -1 ..= t*+1`; every
/// summand lies in `[1 - d, 1]` because the image sits between `w·N_L`
/// and `N_L`.
pub fn splitting_type(ctx: &SheafContext, contact: bool, colength: usize, opts: BuildOptions) -> Result<Splitting> {
    let nn = ctx.normal_rank();
    let top = stable_twist(ctx) + 1;
    let mut h0 = BTreeMap::new();
    h0.insert(-2, 0);
    for t in -1..=top {
        h0.insert(t, h0_image_at(ctx, contact, t, opts));
    }
    let mut degrees = Vec::with_capacity(nn);
    let mut prev_count = 0usize;
    for t in -1..=top {
        let step = h0[&t]
            .checked_sub(h0[&(t - 1)])
            .ok_or_else(|| Error::InconsistentSequence(format!("h0 drops at twist {t}")))?;
        let fresh = step.checked_sub(prev_count).ok_or_else(|| {
            Error::InconsistentSequence(format!("second difference negative at twist {t}"))
        })?;
        degrees.extend(std::iter::repeat_n(-t, fresh));
        prev_count = step;
    }
    if degrees.len() != nn {
        return Err(Error::InconsistentSequence(format!(
            "recovered {} summands, expected {nn}",
            degrees.len()
        )));
    }
    let total: i64 = degrees.iter().sum();
    if total != nn as i64 - colength as i64 {
        return Err(Error::InconsistentSequence(format!(
            "degree {total} disagrees with {nn} - colength {colength}"
        )));
    }
    for (&t, &v) in &h0 {
        if Splitting::h0_at(&degrees, t) != v {
            return Err(Error::InconsistentSequence(format!("h0 at twist {t} not reproduced")));
        }
    }
    Ok(Splitting { degrees, h0 })
}

/// Surjectivity of `v ↦ v(1, t0)` from the twist-0 solutions onto the
/// normal space, for frame parameters `t0`.
pub fn filling_eval(ctx: &SheafContext, contact: bool, points: &[Rat], opts: BuildOptions) -> Result<Vec<bool>> {
    let sys = build_system(ctx, contact, 0, opts);
    let sols = sys.v_solutions();
    let nn = ctx.normal_rank();
    points
        .iter()
        .map(|t0| {
            if ctx.modulus.eval(t0) == rat_zero() {
                return Err(Error::PointOnZ);
            }
            let rows: Vec<Vec<Rat>> = sols
                .iter()
                .map(|s| (0..nn).map(|i| &s[2 * i] + &s[2 * i + 1] * t0).collect())
                .collect();
            Ok(QMat::from_rows(nn, rows).rank() == nn)
        })
        .collect()
}

/// Random frame parameters off `Z`.
pub fn sample_points(ctx: &SheafContext, count: usize, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Rat::new(rng.gen_range(-60i64..=60).into(), rng.gen_range(1i64..=9).into());
        if ctx.g_frame.eval(&p) != rat_zero() && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A computed value next to the closed-form prediction, when one applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Compared<T> {
    pub computed: T,
    pub predicted: Option<T>,
    pub matches: Option<bool>,
}

impl<T: PartialEq + Clone> Compared<T> {
    fn new(computed: T, predicted: Option<T>) -> Self {
        let matches = predicted.as_ref().map(|p| *p == computed);
        Self { computed, predicted, matches }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedSummary {
    pub w: String,
    pub degree: usize,
    pub cycle_type: Partition,
    pub whole: bool,
    pub overlap: usize,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Uniformity {
    pub points_checked: usize,
    pub all_surjective: bool,
    pub splitting_nonnegative: bool,
    pub h1_vanishes: bool,
    pub holds: bool,
}

/// Computed invariants of the image sheaf with their predictions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafReport {
    pub ambient_dim: usize,
    pub codim: usize,
    pub contact: bool,
    pub length: usize,
    pub cycle_type: Partition,
    pub support: usize,
    pub g: String,
    pub marked: MarkedSummary,
    pub smooth_along: bool,
    pub cofactors_coprime: bool,
    pub colength: Compared<usize>,
    /// `h⁰` of the image sheaf per twist.
    pub h0: BTreeMap<i64, usize>,
    pub h0_image: Compared<usize>,
    pub h0_kernel: Compared<i64>,
    /// `v = 0` solutions at twist 0 (`ℓ(A)`); nonzero for `W = Z` means
    /// the residue `b` is not determined by `v`.
    pub kernel_dim: Compared<usize>,
    pub splitting: Vec<i64>,
    pub euler_char: Compared<i64>,
    pub h1: usize,
    pub h1_via_splitting: usize,
    pub filling: bool,
    pub filling_point: String,
    pub uniformity: Option<Uniformity>,
    /// `2N - 2 - colength` next to the expected dimension of the family,
    /// for the contact sheaf with `W = Z`.
    pub expected_family_dim: Option<Compared<i64>>,
    pub extra_h0: BTreeMap<i64, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub build: BuildOptions,
    pub seed: u64,
    /// Further points tested when filling holds at the first one.
    pub uniformity_points: usize,
    /// Extra twists whose `h⁰` is reported.
    pub twists: Vec<i64>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { build: BuildOptions::default(), seed: 0, uniformity_points: 20, twists: Vec::new() }
    }
}

/// Predicted colength: `(c-1)d + Σ min(d_i, k_i - d_i)` for the secant
/// sheaf, `cd - #{d_i = k_i}` for the contact sheaf. With `W = Z` these are
/// `k(c-1)` and `kc - r`.
pub fn predicted_colength(c: usize, w: &MarkedSubscheme, contact: bool) -> usize {
    let d = w.degree();
    if contact {
        c * d - w.saturated()
    } else {
        (c - 1) * d + w.overlap()
    }
}

/// Predicted `v = 0` solution count: `Σ min(d_i, k_i - d_i)` for secant,
/// `#{d_i < k_i}` for contact.
pub fn predicted_kernel_dim(w: &MarkedSubscheme, contact: bool) -> usize {
    if contact {
        w.support() - w.saturated()
    } else {
        w.overlap()
    }
}

pub fn analyze(ctx: &SheafContext, contact: bool, opts: &AnalyzeOptions) -> Result<SheafReport> {
    let b = opts.build;
    let nn = ctx.normal_rank();
    let c = ctx.variety.codim();
    let z = &ctx.scheme;
    let w = &ctx.marked;

    let col = colength(ctx, contact, b)?;
    let split = splitting_type(ctx, contact, col, b)?;
    let sys0 = build_system(ctx, contact, 0, b);
    let h0_image = sys0.h0_image();
    let chi = 2 * nn as i64 - col as i64;
    let h1 = h0_image as i64 - chi;
    let h1_split = Splitting::h1_at(&split.degrees, 0);
    if h1 < 0 || h1 as usize != h1_split {
        return Err(Error::InconsistentSequence(format!(
            "h1 routes disagree: {h1} from the Euler characteristic, {h1_split} from the splitting"
        )));
    }
    let h1 = h1 as usize;

    let points = sample_points(ctx, 1 + opts.uniformity_points, opts.seed);
    let filling = filling_eval(ctx, contact, &points[..1], b)?[0];
    let uniformity = if filling {
        let rest = filling_eval(ctx, contact, &points[1..], b)?;
        let all_surjective = rest.iter().all(|&x| x);
        let splitting_nonnegative = split.nonnegative();
        Some(Uniformity {
            points_checked: rest.len(),
            all_surjective,
            splitting_nonnegative,
            h1_vanishes: h1 == 0,
            holds: all_surjective && splitting_nonnegative && h1 == 0,
        })
    } else {
        None
    };

    let pred_col = predicted_colength(c, w, contact);
    let h0_kernel_pred =
        (h1 == 0).then(|| (2 * nn + predicted_kernel_dim(w, contact)) as i64 - pred_col as i64);
    let expected_family_dim = (contact && w.is_whole()).then(|| {
        let params = SecantFamilyParams::lines_in_projective_space(
            ctx.variety.ambient_dim() as i64,
            c as i64,
            z.cycle_type.clone(),
        );
        Compared::new(
            2 * nn as i64 - col as i64,
            Some(expected_dim_secant(&params).value),
        )
    });
    let extra_h0 = opts
        .twists
        .iter()
        .map(|&t| (t, h0_image_at(ctx, contact, t, b)))
        .collect();

    Ok(SheafReport {
        ambient_dim: ctx.variety.ambient_dim(),
        codim: c,
        contact,
        length: z.length,
        cycle_type: z.cycle_type.clone(),
        support: z.support(),
        g: z.g.display(),
        marked: MarkedSummary {
            w: w.equation().display(),
            degree: w.degree(),
            cycle_type: w.cycle_type().clone(),
            whole: w.is_whole(),
            overlap: w.overlap(),
            support: w.support(),
        },
        smooth_along: smooth_along(&ctx.variety, &ctx.line, z),
        cofactors_coprime: z.cofactors_coprime(),
        colength: Compared::new(col, Some(pred_col)),
        h0: split.h0.clone(),
        h0_image: Compared::new(h0_image, (h1 == 0).then(|| (chi.max(0)) as usize)),
        h0_kernel: Compared::new(sys0.h0_kernel() as i64, h0_kernel_pred),
        kernel_dim: Compared::new(sys0.b_kernel(), Some(predicted_kernel_dim(w, contact))),
        splitting: split.degrees,
        euler_char: Compared::new(h0_image as i64 - h1_split as i64, Some(chi)),
        h1,
        h1_via_splitting: h1_split,
        filling,
        filling_point: fmt_rat(&points[0]),
        uniformity,
        expected_family_dim,
        extra_h0,
    })
}

/// Builds the context and analyzes in one call.
pub fn analyze_instance(
    x: &VarietySpec,
    line: &LineSpec,
    marked: Option<&MarkedSpec>,
    contact: bool,
    opts: &AnalyzeOptions,
) -> Result<SheafReport> {
    analyze(&SheafContext::new(x, line, marked)?, contact, opts)
}
