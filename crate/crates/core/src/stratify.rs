//! Partitions, the refinement order, and the closed-form dimension and
//! codimension counts for secant families and generic projections.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rat};

/// Weakly decreasing list of positive parts. Weight `k` is the sum, the
/// block count `r` the number of parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `(1^k)`.
    pub fn ones(k: usize) -> Self {
        Self { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn blocks(&self) -> usize {
        self.parts.len()
    }

    /// All partitions of `k`, in reverse lexicographic order.
    pub fn all_of_weight(k: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k, k, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad partition part '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// True iff `fine` is obtained from `coarse` by subdividing blocks.
pub fn refines(fine: &Partition, coarse: &Partition) -> bool {
    if fine.weight() != coarse.weight() || fine.blocks() < coarse.blocks() {
        return false;
    }
    fn assign(i: usize, fine: &[usize], room: &mut [usize]) -> bool {
        if i == fine.len() {
            return room.iter().all(|&r| r == 0);
        }
        let mut tried = BTreeSet::new();
        for b in 0..room.len() {
            // blocks with equal remaining room are interchangeable
            if room[b] < fine[i] || !tried.insert(room[b]) {
                continue;
            }
            room[b] -= fine[i];
            if assign(i + 1, fine, room) {
                return true;
            }
            room[b] += fine[i];
        }
        false
    }
    let mut room = coarse.parts.clone();
    assign(0, &fine.parts, &mut room)
}

/// Parameters of a generic projection `X^n ⊂ P^m` from a center of
/// dimension `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionParams {
    pub ambient: i64,
    pub dim: i64,
    pub center: i64,
}

impl ProjectionParams {
    pub fn new(ambient: i64, dim: i64, center: i64) -> Result<Self> {
        if dim < 1 || ambient <= dim || center < 0 {
            return Err(Error::InvalidInput(format!(
                "need 1 <= n < m and center >= 0, got m={ambient}, n={dim}, center={center}"
            )));
        }
        Ok(Self { ambient, dim, center })
    }

    pub fn codim(&self) -> i64 {
        self.ambient - self.dim
    }

    /// Dimension of the projection target `P^(m - λ - 1)`.
    pub fn target_dim(&self) -> i64 {
        self.ambient - self.center - 1
    }

    /// The projection is a morphism on `X` only when `λ < c`.
    pub fn is_morphism(&self) -> bool {
        self.center < self.codim()
    }
}

/// Parameters of a family of `(k.)`-secant rational curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantFamilyParams {
    pub ambient: i64,
    /// `-K_Y · L`; equals `m + 1` for lines in `P^m`.
    pub anticanonical_degree: i64,
    pub codim: i64,
    pub cycle_type: Partition,
}

impl SecantFamilyParams {
    pub fn lines_in_projective_space(ambient: i64, codim: i64, cycle_type: Partition) -> Self {
        Self { ambient, anticanonical_degree: ambient + 1, codim, cycle_type }
    }
}

/// A dimension count, flagged empty when negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedDim {
    pub value: i64,
    pub empty: bool,
}

impl ExpectedDim {
    fn of(value: i64) -> Self {
        Self { value, empty: value < 0 }
    }
}

/// `m - 3 - K_Y·L - k c + r`.
pub fn expected_dim_secant(p: &SecantFamilyParams) -> ExpectedDim {
    let k = p.cycle_type.weight() as i64;
    let r = p.cycle_type.blocks() as i64;
    ExpectedDim::of(p.ambient - 3 + p.anticanonical_degree - k * p.codim + r)
}

/// `k (c - λ - 1)`: codimension of the length-`k` locus with planar fibres.
pub fn codim_planar(k: i64, p: &ProjectionParams) -> i64 {
    k * (p.codim() - p.center - 1)
}

/// Emptiness of the length-`k` locus of a projection from a general line:
/// `k (c - 2) > m - 2`.
pub fn line_projection_locus_empty(k: i64, p: &ProjectionParams) -> bool {
    p.center == 1 && k * (p.codim() - 2) > p.ambient - 2
}

/// One row of the planar-fibre stratification of a projection target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocusRow {
    pub k: i64,
    pub codim: i64,
    /// `target_dim - codim`, negative when the locus is expected empty.
    pub dim: ExpectedDim,
    /// Only meaningful for `λ = 1`.
    pub line_center_empty: bool,
}

/// Rows for `k = 1, 2, ...` up to and including the first empty locus.
pub fn projection_table(p: &ProjectionParams, k_max: i64) -> Vec<LocusRow> {
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let codim = codim_planar(k, p);
        let dim = ExpectedDim::of(p.target_dim() - codim);
        rows.push(LocusRow { k, codim, dim, line_center_empty: line_projection_locus_empty(k, p) });
        if dim.empty {
            break;
        }
    }
    rows
}

/// `k (c - λ) - r`: codimension of the Thom–Boardman locus of type `(k.)`.
pub fn codim_thom_boardman(kt: &Partition, p: &ProjectionParams) -> i64 {
    let k = kt.weight() as i64;
    k * (p.codim() - p.center) - kt.blocks() as i64
}

/// `min(c, c + e - n/(e+1))`; centers of dimension strictly below it give
/// fibres of embedding dimension at most `e` off the singular locus.
pub fn planarity_bound(n: i64, c: i64, e: i64) -> Rat {
    let c_r = rat(c);
    let other = rat(c + e) - Rat::new(n.into(), (e + 1).into());
    if other < c_r {
        other
    } else {
        c_r
    }
}

/// `4n - 6 + (λ-2)(n+c-λ) < (λ+1)(n+c-λ)`.
pub fn genericity_inequality(n: i64, c: i64, lambda: i64) -> bool {
    let g = n + c - lambda;
    4 * n - 6 + (lambda - 2) * g < (lambda + 1) * g
}

/// Can `proper` be reached from `postulated` by uniting two blocks or
/// growing a block by one?
pub fn is_degeneration(proper: &Partition, postulated: &Partition) -> bool {
    let target_w = proper.weight();
    let target_r = proper.blocks();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([postulated.clone()]);
    while let Some(p) = queue.pop_front() {
        if &p == proper {
            return true;
        }
        if p.weight() > target_w || p.blocks() < target_r || !seen.insert(p.clone()) {
            continue;
        }
        let parts = p.parts();
        for i in 0..parts.len() {
            let mut grown = parts.to_vec();
            grown[i] += 1;
            queue.push_back(Partition::new(grown).expect("positive parts"));
            for j in i + 1..parts.len() {
                let mut united: Vec<usize> = parts
                    .iter()
                    .enumerate()
                    .filter(|&(idx, _)| idx != i && idx != j)
                    .map(|(_, &v)| v)
                    .collect();
                united.push(parts[i] + parts[j]);
                queue.push_back(Partition::new(united).expect("positive parts"));
            }
        }
    }
    false
}

/// `w(postulated)·c − r(postulated) < w(proper)·c − r(proper)`, defined only
/// when `proper` is a degeneration of `postulated`.
pub fn corollary_weight_inequality(
    proper: &Partition,
    postulated: &Partition,
    c: i64,
) -> Result<bool> {
    if !is_degeneration(proper, postulated) {
        return Err(Error::NotReachable {
            proper: proper.to_string(),
            postulated: postulated.to_string(),
        });
    }
    let cost = |p: &Partition| p.weight() as i64 * c - p.blocks() as i64;
    Ok(cost(postulated) < cost(proper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Independent oracle: try every map from fine blocks to coarse blocks.
    fn refines_by_enumeration(fine: &Partition, coarse: &Partition) -> bool {
        if fine.weight() != coarse.weight() {
            return false;
        }
        let nf = fine.blocks();
        let nc = coarse.blocks();
        if nc == 0 {
            return nf == 0;
        }
        let total = nc.pow(nf as u32);
        (0..total).any(|mut code| {
            let mut sums = vec![0; nc];
            for &part in fine.parts() {
                sums[code % nc] += part;
                code /= nc;
            }
            sums == coarse.parts()
        })
    }

    #[test]
    fn refinement_examples() {
        assert!(refines(&p(&[2, 1]), &p(&[3])));
        assert!(!refines(&p(&[3]), &p(&[2, 1])));
        assert!(refines(&p(&[2, 2, 1]), &p(&[3, 2])));
        assert!(refines_by_enumeration(&p(&[2, 2, 1]), &p(&[3, 2])));
    }

    #[test]
    fn refinement_is_a_partial_order() {
        for k in 0..=8 {
            let all = Partition::all_of_weight(k);
            for a in &all {
                assert!(refines(a, a));
                for b in &all {
                    assert_eq!(refines(a, b), refines_by_enumeration(a, b), "{a} {b}");
                    if a != b && refines(a, b) {
                        assert!(!refines(b, a));
                    }
                }
            }
            if k <= 6 {
                for a in &all {
                    for b in &all {
                        for c in &all {
                            if refines(a, b) && refines(b, c) {
                                assert!(refines(a, c));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|k| Partition::all_of_weight(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn expected_dimension_examples() {
        let tri = SecantFamilyParams::lines_in_projective_space(4, 2, p(&[1, 1, 1]));
        assert_eq!(expected_dim_secant(&tri).value, 3);
        let quad = SecantFamilyParams::lines_in_projective_space(4, 2, p(&[1, 1, 1, 1]));
        assert_eq!(expected_dim_secant(&quad).value, 2);
        for m in 2..10 {
            let none = SecantFamilyParams::lines_in_projective_space(m, 1, Partition::empty());
            assert_eq!(expected_dim_secant(&none).value, 2 * m - 2);
        }
        let neg = SecantFamilyParams::lines_in_projective_space(3, 2, p(&[5]));
        assert!(expected_dim_secant(&neg).empty);
    }

    #[test]
    fn expected_dim_matches_contact_euler_characteristic() {
        for m in 2..=10 {
            for c in 1..m {
                for k in 0..=6 {
                    for kt in Partition::all_of_weight(k) {
                        let r = kt.blocks() as i64;
                        let params = SecantFamilyParams::lines_in_projective_space(m, c, kt);
                        let lhs = expected_dim_secant(&params).value;
                        assert_eq!(lhs, (2 * m - 2) - (k as i64 * c - r));
                    }
                }
            }
        }
    }

    #[test]
    fn projection_codimensions() {
        let pp = ProjectionParams::new(5, 2, 1).unwrap();
        assert_eq!(codim_planar(2, &pp), 2);
        for k in 1..=20 {
            for c in 1..=20 {
                let pp = ProjectionParams::new(c + 3, 3, 0).unwrap();
                assert_eq!(codim_planar(k, &pp), k * (c - 1));
                assert_eq!(codim_thom_boardman(&Partition::ones(k as usize), &pp), codim_planar(k, &pp));
            }
        }
        assert_eq!(codim_thom_boardman(&p(&[1, 1, 1]), &ProjectionParams::new(4, 2, 0).unwrap()), 3);
        assert_eq!(codim_thom_boardman(&p(&[4]), &ProjectionParams::new(5, 2, 1).unwrap()), 7);
    }

    #[test]
    fn planarity_bounds() {
        for c in 1..10 {
            assert_eq!(planarity_bound(6, c, 2), rat(c));
            assert_eq!(planarity_bound(3, c, 2), rat(c));
        }
        assert_eq!(planarity_bound(9, 4, 2), rat(3));
    }

    #[test]
    fn threefold_projections() {
        // X³ ⊂ P⁷ to P⁵: a double curve, no triple points
        let p = ProjectionParams::new(7, 3, 1).unwrap();
        let rows = projection_table(&p, 10);
        assert_eq!(rows[1].dim.value, 1);
        assert!(rows[2].dim.empty && rows[2].line_center_empty);
        assert_eq!(rows.len(), 3);
        // X³ ⊂ P⁶ to P⁴: double surface, triple curve, finitely many 4-fold points
        let p = ProjectionParams::new(6, 3, 1).unwrap();
        let dims: Vec<i64> = projection_table(&p, 10).iter().map(|r| r.dim.value).collect();
        assert_eq!(dims, vec![3, 2, 1, 0, -1]);
        // the 4-fold points are ordinary: any non-reduced type of weight 4 is empty
        assert_eq!(codim_thom_boardman(&Partition::ones(4), &p), 4);
        assert!(codim_thom_boardman(&Partition::new(vec![2, 1, 1]).unwrap(), &p) > p.target_dim());
    }

    #[test]
    fn genericity_examples() {
        assert!(genericity_inequality(3, 2, 2));
        // n=6, c=2, λ=2: 18 + 0 = 18 vs 3*6 = 18, strict
        assert!(!genericity_inequality(6, 2, 2));
    }

    #[test]
    fn genericity_matches_planarity_threshold() {
        for n in 1..=20 {
            for c in 1..=20 {
                for lambda in 2..c {
                    let threshold = rat(c + 2) - Rat::new(n.into(), 3.into());
                    assert_eq!(genericity_inequality(n, c, lambda), rat(lambda) < threshold);
                }
            }
        }
    }

    #[test]
    fn weight_inequality_examples() {
        assert!(corollary_weight_inequality(&p(&[2]), &p(&[1, 1]), 2).unwrap());
        assert!(corollary_weight_inequality(&p(&[3]), &p(&[2]), 2).unwrap());
        assert!(!corollary_weight_inequality(&p(&[2, 1]), &p(&[2, 1]), 2).unwrap());
        assert!(matches!(
            corollary_weight_inequality(&p(&[1, 1]), &p(&[2]), 2),
            Err(Error::NotReachable { .. })
        ));
    }

    #[test]
    fn every_strict_degeneration_costs_more() {
        let all: Vec<Partition> = (1..=7).flat_map(Partition::all_of_weight).collect();
        for c in 2..=4 {
            for a in &all {
                for b in &all {
                    if a != b && is_degeneration(a, b) {
                        assert!(corollary_weight_inequality(a, b, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn parses_partitions() {
        assert_eq!("(2,1,1)".parse::<Partition>().unwrap(), p(&[1, 2, 1]));
        assert_eq!("3".parse::<Partition>().unwrap(), p(&[3]));
        assert!("2,0".parse::<Partition>().is_err());
    }
}
