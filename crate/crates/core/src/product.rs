//! Tensor products of operations and the structure of their stable
//! partitions.
//!
//! Coordinates are numbered from 0, and factor 0 is the most significant
//! digit of the flat index. A coordinate set is a sorted list of distinct
//! factor indices; the subspace `X_A` is indexed by the same mixed-radix
//! rule restricted to `A`.

use crate::error::{Error, Result};
use crate::graph::{connectability, is_ergodic, is_irreducible};
use crate::residue::is_strongly_ergodic;
use crate::limits::Limits;
use crate::op::BinaryOperation;
use crate::partitions::{is_finer_partition, is_stable_partition, Partition};
use crate::subset::{Subset, MAX_ALPHABET};
use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

/// Mixed-radix codec between coordinate tuples and flat indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductSpace {
    radices: Vec<usize>,
}

impl ProductSpace {
    pub fn new(radices: Vec<usize>) -> Result<ProductSpace> {
        if radices.is_empty() || radices.contains(&0) {
            return Err(Error::DimensionMismatch(format!("factor sizes {radices:?}")));
        }
        let size = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .unwrap_or(usize::MAX);
        if size > MAX_ALPHABET {
            return Err(Error::ProductTooLarge {
                size,
                max: MAX_ALPHABET,
            });
        }
        Ok(ProductSpace { radices })
    }

    pub fn factors(&self) -> &[usize] {
        &self.radices
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn size(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn flat(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.radices.len());
        coords
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&c, &r)| acc * r + c)
    }

    pub fn unflat(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = i % r;
            i /= r;
        }
        out
    }

    /// The space `X_A` for a sorted coordinate set `A`.
    pub fn subspace(&self, coords: &[usize]) -> Result<ProductSpace> {
        self.check_coords(coords)?;
        ProductSpace::new(coords.iter().map(|&c| self.radices[c]).collect())
    }

    /// Flat index in `X_A` of the `A`-coordinates of the point `x`.
    pub fn project_point(&self, x: usize, coords: &[usize]) -> usize {
        let t = self.unflat(x);
        coords
            .iter()
            .fold(0, |acc, &c| acc * self.radices[c] + t[c])
    }

    pub fn complement(&self, coords: &[usize]) -> Vec<usize> {
        (0..self.arity()).filter(|c| !coords.contains(c)).collect()
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        let sorted = coords.windows(2).all(|w| w[0] < w[1]);
        if coords.is_empty() || !sorted || coords.iter().any(|&c| c >= self.arity()) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate set {coords:?} for {} factors",
                self.arity()
            )));
        }
        Ok(())
    }

    /// Renders a flat point as a tuple, e.g. `(0,1)`.
    pub fn render(&self, x: usize) -> String {
        let parts: Vec<String> = self.unflat(x).iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// `*_1 ⊗ .. ⊗ *_m` acting componentwise on the product space.
pub fn tensor_ops(ops: &[BinaryOperation], limits: &Limits) -> Result<(BinaryOperation, ProductSpace)> {
    if ops.len() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "a product needs at least two factors, got {}",
            ops.len()
        )));
    }
    let size = ops
        .iter()
        .try_fold(1usize, |acc, op| acc.checked_mul(op.q()))
        .unwrap_or(usize::MAX);
    let max = limits.product_cap.min(MAX_ALPHABET);
    if size > max {
        return Err(Error::ProductTooLarge { size, max });
    }
    let space = ProductSpace::new(ops.iter().map(BinaryOperation::q).collect())?;
    let op = BinaryOperation::from_fn(size, |a, b| {
        let (ta, tb) = (space.unflat(a), space.unflat(b));
        let tc: Vec<usize> = ops
            .iter()
            .enumerate()
            .map(|(i, op)| op.apply(ta[i], tb[i]))
            .collect();
        space.flat(&tc)
    });
    Ok((op, space))
}

/// Rectangles `A_1 x .. x A_m` over all choices of blocks.
pub fn tensor_partitions(hs: &[Partition], space: &ProductSpace) -> Result<Partition> {
    if hs.len() != space.arity() || hs.iter().zip(space.factors()).any(|(h, &q)| h.q() != q) {
        return Err(Error::DimensionMismatch(format!(
            "partitions over {:?} for factors {:?}",
            hs.iter().map(Partition::q).collect::<Vec<_>>(),
            space.factors()
        )));
    }
    let blocks = hs
        .iter()
        .map(|h| h.blocks().iter().copied())
        .multi_cartesian_product()
        .map(|choice| {
            (0..space.size())
                .filter(|&x| space.unflat(x).iter().zip(&choice).all(|(&c, b)| b.contains(c)))
                .collect()
        })
        .collect();
    Partition::new(space.size(), blocks)
}

/// A tensor product together with its factors, for structure queries.
#[derive(Debug, Clone)]
pub struct ProductOperation {
    factors: Vec<BinaryOperation>,
    space: ProductSpace,
    op: BinaryOperation,
}

/// The two-part structure of a product stable partition for one split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDecomposition {
    pub coords_a: Vec<usize>,
    pub coords_b: Vec<usize>,
    pub l_a: Vec<Vec<usize>>,
    pub u_a: Vec<Vec<usize>>,
    pub l_b: Vec<Vec<usize>>,
    pub u_b: Vec<Vec<usize>>,
    pub correlation: usize,
    pub blocks: Vec<BlockDecomposition>,
}

/// One block written as a disjoint union of rectangles `rows x cols`,
/// with rows in `X_A` and columns in `X_B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub block: Vec<usize>,
    pub pieces: Vec<(Vec<usize>, Vec<usize>)>,
}

impl ProductOperation {
    pub fn new(factors: Vec<BinaryOperation>, limits: &Limits) -> Result<ProductOperation> {
        let (op, space) = tensor_ops(&factors, limits)?;
        Ok(ProductOperation { factors, space, op })
    }

    pub fn op(&self) -> &BinaryOperation {
        &self.op
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn factors(&self) -> &[BinaryOperation] {
        &self.factors
    }

    /// `*_A` on `X_A`, or the single factor when `A` has one coordinate.
    pub fn restrict_op(&self, coords: &[usize]) -> Result<BinaryOperation> {
        self.space.check_coords(coords)?;
        let ops: Vec<BinaryOperation> = coords.iter().map(|&c| self.factors[c].clone()).collect();
        if ops.len() == 1 {
            return Ok(ops.into_iter().next().unwrap());
        }
        Ok(tensor_ops(&ops, &Limits::wide())?.0)
    }

    /// The product of the factors in `A`, which needs at least two of them.
    pub fn restrict(&self, coords: &[usize]) -> Result<ProductOperation> {
        self.space.check_coords(coords)?;
        ProductOperation::new(
            coords.iter().map(|&c| self.factors[c].clone()).collect(),
            &Limits::wide(),
        )
    }

    fn check_structure(&self, h: &Partition) -> Result<()> {
        if h.q() != self.space.size() {
            return Err(Error::DimensionMismatch(format!(
                "partition over {} points for a product of size {}",
                h.q(),
                self.space.size()
            )));
        }
        if !self.factors.iter().all(is_ergodic) {
            return Err(Error::NotErgodicFactors);
        }
        if !is_stable_partition(&self.op, h) {
            return Err(Error::NotStable);
        }
        Ok(())
    }

    fn as_partition(q: usize, blocks: Vec<Subset>, what: &str) -> Result<Partition> {
        let mut blocks = blocks;
        blocks.sort();
        blocks.dedup();
        Partition::new(q, blocks)
            .map_err(|e| Error::DecompositionFailed(format!("{what} is not a partition: {e}")))
    }

    /// `U_A(H)`: the projections of the blocks onto the coordinates `A`.
    pub fn project_u(&self, h: &Partition, coords: &[usize]) -> Result<Partition> {
        let sub = self.space.subspace(coords)?;
        self.check_structure(h)?;
        let blocks = h
            .blocks()
            .iter()
            .map(|b| b.iter().map(|x| self.space.project_point(x, coords)).collect())
            .collect();
        let u = Self::as_partition(sub.size(), blocks, "U_A")?;
        if !is_stable_partition(&self.restrict_op(coords)?, &u) {
            return Err(Error::DecompositionFailed(format!("U_A = {u} is not stable")));
        }
        Ok(u)
    }

    /// `L_A(H)`: the nonempty slices of blocks over fixed complementary
    /// coordinates. `A` must be a strict subset.
    pub fn project_l(&self, h: &Partition, coords: &[usize]) -> Result<Partition> {
        let sub = self.space.subspace(coords)?;
        let rest = self.space.complement(coords);
        if rest.is_empty() {
            return Err(Error::DimensionMismatch(
                "L_A needs a strict subset of the coordinates".into(),
            ));
        }
        self.check_structure(h)?;
        let blocks = self.slices(h, coords, &rest);
        let l = Self::as_partition(sub.size(), blocks, "L_A")?;
        if !is_stable_partition(&self.restrict_op(coords)?, &l) {
            return Err(Error::DecompositionFailed(format!("L_A = {l} is not stable")));
        }
        Ok(l)
    }

    fn slices(&self, h: &Partition, coords: &[usize], rest: &[usize]) -> Vec<Subset> {
        let mut out = Vec::new();
        for &b in h.blocks() {
            let mut fibers: std::collections::BTreeMap<usize, Subset> = Default::default();
            for x in b.iter() {
                let key = self.space.project_point(x, rest);
                let e = fibers.entry(key).or_default();
                *e = e.with(self.space.project_point(x, coords));
            }
            out.extend(fibers.into_values());
        }
        out
    }

    /// Splits `H` along `(A, complement)` into `L`, `U`, the correlation and
    /// per-block rectangle pieces, and checks the structure theorem on the
    /// result.
    pub fn decompose(&self, h: &Partition, coords_a: &[usize]) -> Result<ProductDecomposition> {
        let coords_b = self.space.complement(coords_a);
        if coords_b.is_empty() {
            return Err(Error::DimensionMismatch(
                "a split needs both sides nonempty".into(),
            ));
        }
        let l_a = self.project_l(h, coords_a)?;
        let u_a = self.project_u(h, coords_a)?;
        let l_b = self.project_l(h, &coords_b)?;
        let u_b = self.project_u(h, &coords_b)?;
        if !is_finer_partition(&l_a, &u_a) || !is_finer_partition(&l_b, &u_b) {
            return fail("L is not finer than U".into());
        }
        let (la, ua) = (l_a.block_size().unwrap(), u_a.block_size().unwrap());
        let (lb, ub) = (l_b.block_size().unwrap(), u_b.block_size().unwrap());
        if ua % la != 0 || ub % lb != 0 || ua / la != ub / lb {
            return fail(format!("size ratios {ua}/{la} and {ub}/{lb} disagree"));
        }
        let n = ua / la;
        if h.block_size() != Some(n * la * lb) {
            return fail(format!("||H|| differs from {n} * {la} * {lb}"));
        }

        let space = &self.space;
        let blocks: Vec<BlockDecomposition> = h
            .blocks()
            .par_iter()
            .map(|&blk| {
                // group row points by their column fiber
                let mut by_fiber: std::collections::BTreeMap<Subset, Subset> = Default::default();
                let rows: Subset = blk.iter().map(|x| space.project_point(x, coords_a)).collect();
                for r in rows.iter() {
                    let fiber: Subset = blk
                        .iter()
                        .filter(|&x| space.project_point(x, coords_a) == r)
                        .map(|x| space.project_point(x, &coords_b))
                        .collect();
                    let e = by_fiber.entry(fiber).or_default();
                    *e = e.with(r);
                }
                let mut pieces: Vec<(Subset, Subset)> =
                    by_fiber.into_iter().map(|(f, r)| (r, f)).collect();
                pieces.sort_by_key(|(r, _)| r.first());
                (blk, pieces)
            })
            .map(|(blk, pieces)| {
                if pieces.len() != n {
                    return fail(format!("block {blk} splits into {} pieces, expected {n}", pieces.len()));
                }
                let mut seen_cols = Subset::EMPTY;
                let mut all_rows = Subset::EMPTY;
                for &(r, c) in &pieces {
                    if !l_a.blocks().contains(&r) || !l_b.blocks().contains(&c) {
                        return fail(format!("piece {r} x {c} of {blk} is not an L rectangle"));
                    }
                    if c.intersects(seen_cols) {
                        return fail(format!("column parts of {blk} overlap"));
                    }
                    seen_cols = seen_cols.union(c);
                    all_rows = all_rows.union(r);
                }
                if !u_a.blocks().contains(&all_rows) || !u_b.blocks().contains(&seen_cols) {
                    return fail(format!("pieces of {blk} do not union to U blocks"));
                }
                Ok(BlockDecomposition {
                    block: blk.to_vec(),
                    pieces: pieces.iter().map(|(r, c)| (r.to_vec(), c.to_vec())).collect(),
                })
            })
            .collect::<Result<_>>()?;

        Ok(ProductDecomposition {
            coords_a: coords_a.to_vec(),
            coords_b,
            l_a: l_a.to_vecs(),
            u_a: u_a.to_vecs(),
            l_b: l_b.to_vecs(),
            u_b: u_b.to_vecs(),
            correlation: n,
            blocks,
        })
    }

    /// `H_m = U_m(H)` and `H_i = U_i(L_{0..=i}(H))` for `i < m`, with the
    /// block counts checked to multiply to `|H|`.
    pub fn canonical_factorization(&self, h: &Partition) -> Result<Vec<Partition>> {
        self.check_structure(h)?;
        let m = self.space.arity();
        let mut out = Vec::with_capacity(m);
        for i in 0..m - 1 {
            let prefix: Vec<usize> = (0..=i).collect();
            let l = self.project_l(h, &prefix)?;
            let f = if i == 0 {
                l
            } else {
                self.restrict(&prefix)?.project_u(&l, &[i])?
            };
            out.push(f);
        }
        out.push(self.project_u(h, &[m - 1])?);
        let count: usize = out.iter().map(Partition::len).product();
        if count != h.len() {
            return Err(Error::DecompositionFailed(format!(
                "factor block counts multiply to {count}, not {}",
                h.len()
            )));
        }
        Ok(out)
    }

    /// `con` of the product, which equals the largest factor `con` when
    /// every factor is ergodic.
    pub fn connectability(&self) -> Result<usize> {
        connectability(&self.op)
    }

    /// `C_1 x .. x C_m` as a set of flat points.
    pub fn product_set(&self, parts: &[Subset]) -> Result<Subset> {
        if parts.len() != self.space.arity() {
            return Err(Error::DimensionMismatch(format!(
                "{} parts for {} factors",
                parts.len(),
                self.space.arity()
            )));
        }
        Ok((0..self.space.size())
            .filter(|&x| {
                self.space
                    .unflat(x)
                    .iter()
                    .zip(parts)
                    .all(|(&c, s)| s.contains(c))
            })
            .collect())
    }
}

/// The flags compared by [`check_product`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperationFlags {
    pub q: usize,
    pub uniformity_preserving: bool,
    pub irreducible: bool,
    pub ergodic: bool,
    pub strongly_ergodic: bool,
    /// Present for ergodic operations.
    pub connectability: Option<usize>,
}

pub fn operation_flags(op: &BinaryOperation, limits: &Limits) -> Result<OperationFlags> {
    let ergodic = is_ergodic(op);
    Ok(OperationFlags {
        q: op.q(),
        uniformity_preserving: op.is_uniformity_preserving(),
        irreducible: is_irreducible(op),
        ergodic,
        strongly_ergodic: is_strongly_ergodic(op, limits)?,
        connectability: if ergodic { Some(connectability(op)?) } else { None },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductLaw {
    pub name: String,
    pub holds: bool,
}

/// Factor and product flags side by side, with the product laws that tie
/// them together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub factors: Vec<OperationFlags>,
    pub product: OperationFlags,
    pub laws: Vec<ProductLaw>,
}

impl ProductCheck {
    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(|l| l.holds)
    }
}

/// Classifies the factors and their product and evaluates the product laws.
/// `limits.max_q` must admit the product alphabet for the strong
/// ergodicity test.
pub fn check_product(factors: &[BinaryOperation], limits: &Limits) -> Result<ProductCheck> {
    let prod = ProductOperation::new(factors.to_vec(), limits)?;
    let fs: Vec<OperationFlags> = factors
        .iter()
        .map(|f| operation_flags(f, limits))
        .collect::<Result<_>>()?;
    let pf = operation_flags(prod.op(), limits)?;
    let all = |get: fn(&OperationFlags) -> bool| fs.iter().all(get);
    let law = |name: &str, holds: bool| ProductLaw {
        name: name.into(),
        holds,
    };
    let max_con = fs.iter().filter_map(|f| f.connectability).max();
    let laws = vec![
        law(
            "uniformity preserving iff every factor is",
            pf.uniformity_preserving == all(|f| f.uniformity_preserving),
        ),
        law(
            "irreducible only if every factor is",
            !pf.irreducible || all(|f| f.irreducible),
        ),
        law("ergodic iff every factor is", pf.ergodic == all(|f| f.ergodic)),
        law(
            "connectability is the largest factor connectability",
            !pf.ergodic || pf.connectability == max_con,
        ),
        law(
            "strongly ergodic iff every factor is",
            pf.strongly_ergodic == all(|f| f.strongly_ergodic),
        ),
    ];
    Ok(ProductCheck {
        factors: fs,
        product: pf,
        laws,
    })
}

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::DecompositionFailed(msg))
}

/// `C` meets every block of `H` exactly once.
pub fn is_section(h: &Partition, c: Subset) -> bool {
    c.len() == h.len() && h.blocks().iter().all(|b| b.intersection(c).len() == 1)
}
