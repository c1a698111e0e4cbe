//! Finite subschemes of a line given by a binary form: cycle types, the
//! multiple part, the locally trivial tangent space and stratum dimensions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    fix_chart, gcd_binforms, rat_one, rat_zero, squarefree_decomposition, BinForm, Chart, QMat, Rat,
    UniPoly,
};
use crate::stratify::Partition;

/// `Z = V(g) ⊂ P¹` together with its cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvilinearScheme {
    g: BinForm,
    cycle_type: Partition,
}

impl CurvilinearScheme {
    pub fn new(g: BinForm) -> Result<Self> {
        let cycle_type = cycle_type(&g)?;
        Ok(Self { g, cycle_type })
    }

    pub fn equation(&self) -> &BinForm {
        &self.g
    }

    pub fn length(&self) -> usize {
        self.g.degree()
    }

    pub fn cycle_type(&self) -> &Partition {
        &self.cycle_type
    }

    pub fn support(&self) -> usize {
        self.cycle_type.blocks()
    }

    /// Membership in the same stratum `D_(k.)`.
    pub fn same_stratum(&self, other: &Self) -> bool {
        self.cycle_type == other.cycle_type
    }
}

/// Each squarefree layer `q` of multiplicity `m` contributes `deg q`
/// blocks of size `m`.
pub fn cycle_type(g: &BinForm) -> Result<Partition> {
    let dec = squarefree_decomposition(g)?;
    let parts = dec
        .factors
        .iter()
        .flat_map(|(m, q)| std::iter::repeat_n(*m, q.degree()))
        .collect();
    Partition::new(parts)
}

/// `M(g) = Π q_i^(m_i - 1) = gcd(g, ∂g/∂s, ∂g/∂t)`, normalized.
pub fn multiple_part(g: &BinForm) -> Result<BinForm> {
    if g.is_zero() {
        return Err(Error::AllZero);
    }
    gcd_binforms(&[g.clone(), g.partial_s(), g.partial_t()])
}

/// `g / M(g)`, normalized.
pub fn squarefree_part(g: &BinForm) -> Result<BinForm> {
    let m = multiple_part(g)?;
    Ok(g.exact_div(&m).expect("multiple part divides g").normalized())
}

/// `dim Def(z) = k - 1` for a curvilinear point of length `k`; a reduced
/// point is rigid.
pub fn def_space_dim(k: usize) -> usize {
    k.saturating_sub(1)
}

/// Residues modulo `g` in a chart where `g` has no root at infinity.
/// Polynomials are in the chart coordinate `t` (with `s = 1`).
#[derive(Clone, Debug)]
pub struct ResidueSubspace {
    pub chart: Chart,
    /// `g` dehomogenized in the chart.
    pub modulus: UniPoly,
    pub basis: Vec<UniPoly>,
}

impl ResidueSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The space `{b mod g : M(g) | b}`, computed as the kernel of reduction
/// modulo `M(g)` on the residue ring.
pub fn loc_triv_tangent(g: &BinForm) -> Result<ResidueSubspace> {
    if g.is_zero() {
        return Err(Error::AllZero);
    }
    let (gc, chart) = fix_chart(g)?;
    let modulus = gc.dehomogenize();
    let mult = multiple_part(&gc)?.dehomogenize();
    let k = gc.degree();
    let m = mult.degree().expect("nonzero");
    // column j holds the coefficients of t^j mod M
    let cols: Vec<Vec<Rat>> = (0..k)
        .map(|j| {
            let r = UniPoly::monomial(rat_one(), j).rem(&mult);
            (0..m).map(|i| r.coeff(i)).collect()
        })
        .collect();
    let basis = QMat::from_columns(m, &cols)
        .kernel()
        .into_iter()
        .map(UniPoly::from_coeffs)
        .collect();
    Ok(ResidueSubspace { chart, modulus, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    /// Monic polynomials with vanishing subleading coefficient.
    Traceless,
    /// All monic polynomials of degree `k`.
    Full,
}

/// `dim D_(k.)`: `r - 1` traceless, `r` full.
pub fn stratum_dim(kt: &Partition, ambient: Ambient) -> usize {
    let r = kt.blocks();
    match ambient {
        Ambient::Traceless => r.saturating_sub(1),
        Ambient::Full => r,
    }
}

/// Irreducible building block of a constructed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// `t - a s`.
    Linear(Rat),
    /// `s`, the point at infinity.
    Infinity,
    /// `t² - n s²` with `n` not a rational square.
    Quadratic(Rat),
}

impl Block {
    pub fn form(&self) -> BinForm {
        match self {
            Block::Linear(a) => BinForm::root_factor(a),
            Block::Infinity => BinForm::s(),
            Block::Quadratic(n) => {
                BinForm::new(vec![-n.clone(), rat_zero(), rat_one()])
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Block::Quadratic(_) => 2,
            _ => 1,
        }
    }
}

/// `unit * Π block^mult` along with the cycle type and multiple part known
/// by construction. Blocks are assumed pairwise coprime.
#[derive(Clone, Debug)]
pub struct ConstructedForm {
    pub form: BinForm,
    pub cycle_type: Partition,
    pub multiple_part: BinForm,
}

pub fn construct_form(unit: &Rat, blocks: &[(Block, usize)]) -> ConstructedForm {
    let mut form = BinForm::constant(unit.clone());
    let mut mpart = BinForm::one();
    let mut parts = Vec::new();
    for (b, m) in blocks {
        let f = b.form();
        form = form.mul(&f.pow(*m));
        mpart = mpart.mul(&f.pow(m - 1));
        parts.extend(std::iter::repeat_n(*m, b.degree()));
    }
    ConstructedForm {
        form,
        cycle_type: Partition::new(parts).expect("multiplicities are positive"),
        multiple_part: mpart,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn lin(a: i64) -> Block {
        Block::Linear(rat(a))
    }

    #[test]
    fn cycle_type_examples() {
        let c = construct_form(&rat(1), &[(lin(0), 3), (lin(1), 2), (lin(-1), 1)]);
        let z = CurvilinearScheme::new(c.form.clone()).unwrap();
        assert_eq!(z.cycle_type(), &p(&[3, 2, 1]));
        assert_eq!(z.support(), 3);

        let quartic = construct_form(&rat(2), &[(lin(0), 1), (lin(1), 1), (lin(2), 1), (lin(5), 1)]);
        assert_eq!(cycle_type(&quartic.form).unwrap(), p(&[1, 1, 1, 1]));

        let conj = construct_form(&rat(1), &[(Block::Quadratic(rat(2)), 3)]);
        assert_eq!(cycle_type(&conj.form).unwrap(), p(&[3, 3]));
        assert_eq!(cycle_type(&BinForm::zero(3)), Err(Error::AllZero));
    }

    #[test]
    fn def_space_dims() {
        assert_eq!(def_space_dim(2), 1);
        assert_eq!(def_space_dim(4), 3);
        assert_eq!(def_space_dim(1), 0);
    }

    #[test]
    fn multiple_part_examples() {
        let c = construct_form(&rat(1), &[(lin(0), 3), (lin(1), 2), (lin(-1), 1)]);
        let m = multiple_part(&c.form).unwrap();
        assert!(m.associated(&c.multiple_part));
        assert_eq!(m.degree(), 3);
        let sq = construct_form(&rat(1), &[(lin(0), 1), (lin(3), 1)]);
        assert_eq!(multiple_part(&sq.form).unwrap(), BinForm::one());
    }

    #[test]
    fn loc_triv_examples() {
        let c = construct_form(&rat(1), &[(lin(0), 2), (lin(1), 1)]);
        assert_eq!(loc_triv_tangent(&c.form).unwrap().dim(), 2);

        let sq = construct_form(&rat(1), &[(lin(0), 1), (lin(3), 1), (Block::Infinity, 1)]);
        assert_eq!(loc_triv_tangent(&sq.form).unwrap().dim(), 3);

        let tk = BinForm::t().pow(4);
        let lt = loc_triv_tangent(&tk).unwrap();
        assert_eq!(lt.dim(), 1);
        assert!(lt.chart.is_identity());
        assert_eq!(lt.basis[0].degree(), Some(3));
    }

    #[test]
    fn stratum_dims() {
        assert_eq!(stratum_dim(&p(&[5]), Ambient::Traceless), 0);
        assert_eq!(stratum_dim(&Partition::ones(6), Ambient::Full), 6);
        assert_eq!(stratum_dim(&p(&[2, 1]), Ambient::Traceless), 1);
        // (x - a)^2 (x + 2a) is traceless for every a
        let a = ratio(3, 7);
        let f = UniPoly::from_roots(&[a.clone(), a.clone(), -(&a * rat(2))]);
        assert!(f.coeff(2) == rat(0));
    }

    #[test]
    fn strata_closure_dimensions() {
        for k in 1..=7 {
            let all = Partition::all_of_weight(k);
            for fine in &all {
                for coarse in &all {
                    if crate::stratify::refines(fine, coarse) {
                        for amb in [Ambient::Traceless, Ambient::Full] {
                            assert!(stratum_dim(coarse, amb) <= stratum_dim(fine, amb));
                        }
                    }
                }
            }
        }
    }

    fn blocks_strategy() -> impl Strategy<Value = Vec<(Block, usize)>> {
        // distinct linear roots, distinct non-square quadratics, maybe infinity
        (
            proptest::sample::subsequence((-4i64..=4).collect::<Vec<_>>(), 0..4),
            proptest::sample::subsequence(vec![2i64, 3, 5, -1], 0..2),
            any::<bool>(),
            proptest::collection::vec(1usize..4, 8),
        )
            .prop_map(|(lins, quads, inf, mults)| {
                let mut blocks: Vec<Block> = lins.into_iter().map(lin).collect();
                blocks.extend(quads.into_iter().map(|n| Block::Quadratic(rat(n))));
                if inf {
                    blocks.push(Block::Infinity);
                }
                blocks.into_iter().zip(mults).collect()
            })
            .prop_filter("nonempty", |b: &Vec<(Block, usize)>| !b.is_empty())
    }

    proptest! {
        #[test]
        fn constructed_forms_recover_their_type(blocks in blocks_strategy()) {
            let c = construct_form(&ratio(-3, 2), &blocks);
            let k = c.form.degree();
            let r = c.cycle_type.blocks();
            prop_assert_eq!(cycle_type(&c.form).unwrap(), c.cycle_type.clone());
            let m = multiple_part(&c.form).unwrap();
            prop_assert!(m.associated(&c.multiple_part));
            prop_assert_eq!(m.degree(), k - r);
            let sq = squarefree_part(&c.form).unwrap();
            prop_assert!(m.mul(&sq).associated(&c.form));
            let lt = loc_triv_tangent(&c.form).unwrap();
            prop_assert_eq!(lt.dim(), r);
            // oracle: the residues M·t^j, j < r, in the chart
            let mc = multiple_part(&c.form.change_chart(&lt.chart).unwrap()).unwrap().dehomogenize();
            for b in &lt.basis {
                prop_assert!(mc.divides(b));
                prop_assert!(b.degree().is_none_or(|d| d < k));
            }
        }

        #[test]
        fn coprime_products_concatenate_types(split in 0usize..8, blocks in blocks_strategy()) {
            let cut = split.min(blocks.len());
            let (left, right) = blocks.split_at(cut);
            prop_assume!(!left.is_empty() && !right.is_empty());
            let a = construct_form(&rat(1), left);
            let b = construct_form(&rat(1), right);
            let mut parts = a.cycle_type.parts().to_vec();
            parts.extend_from_slice(b.cycle_type.parts());
            prop_assert_eq!(cycle_type(&a.form.mul(&b.form)).unwrap(), Partition::new(parts).unwrap());
        }
    }
}
