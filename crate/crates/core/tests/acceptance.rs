//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use magma_core::census::{latin_squares, uniformity_preserving_tables};
use magma_core::graph::{connectability, is_ergodic, is_irreducible};
use magma_core::op::named::{affine_square, cyclic_group, xor, xor_one};
use magma_core::partitions::{
    cover_orbit_analysis, cover_orbit_search, enumerate_stable_partitions, is_finer_partition,
    is_periodic_partition, is_stable_partition, step_partition, wedge,
};
use magma_core::product::{check_product, is_section, tensor_ops, ProductOperation};
use magma_core::residue::{
    definitional_strong_ergodicity, first_residue, is_strongly_ergodic, partition_cycle,
    residue_chain,
};
use magma_core::{tables, BinaryOperation, Error, Limits, Partition, Subset, SubsetFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn p(q: usize, blocks: &[&[usize]]) -> Partition {
    Partition::from_vecs(q, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: magma_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `||H||` read off the blocks, without trusting `block_size`.
fn uniform_block_size(h: &Partition) -> Option<usize> {
    let sizes: BTreeSet<usize> = h.blocks().iter().map(|b| b.len()).collect();
    (sizes.len() == 1).then(|| *sizes.iter().next().unwrap())
}

/// `H^*` straight from the definition: all products of two blocks.
fn square_family(op: &BinaryOperation, h: &Partition) -> BTreeSet<BTreeSet<usize>> {
    let blocks: Vec<Vec<usize>> = h.to_vecs();
    let mut out = BTreeSet::new();
    for a in &blocks {
        for b in &blocks {
            out.insert(a.iter().flat_map(|&x| b.iter().map(move |&y| op.apply(x, y))).collect());
        }
    }
    out
}

fn as_family(h: &Partition) -> BTreeSet<BTreeSet<usize>> {
    h.to_vecs().into_iter().map(|b| b.into_iter().collect()).collect()
}

/// `K_H` from the definition: the class of `x` is the union of `x * X` over
/// augmenting sequences, found by a search over image vectors.
fn residue_oracle(op: &BinaryOperation, h: &Partition) -> Partition {
    let q = op.q();
    let mut cycle = vec![as_family(h)];
    loop {
        let next: BTreeSet<BTreeSet<usize>> = {
            let last = cycle.last().unwrap();
            let mut out = BTreeSet::new();
            for a in last {
                for b in last {
                    out.insert(a.iter().flat_map(|&x| b.iter().map(move |&y| op.apply(x, y))).collect());
                }
            }
            out
        };
        if next == cycle[0] {
            break;
        }
        cycle.push(next);
    }
    let per = cycle.len();
    let start: Vec<BTreeSet<usize>> = (0..q).map(|x| BTreeSet::from([x])).collect();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(0usize, start, false)]);
    let mut best: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); q];
    while let Some((phase, images, moved)) = queue.pop_front() {
        if moved && phase == 0 && (0..q).all(|x| images[x].contains(&x)) {
            for x in 0..q {
                best[x].extend(images[x].iter().copied());
            }
        }
        for blk in &cycle[phase] {
            let next: Vec<BTreeSet<usize>> = images
                .iter()
                .map(|img| img.iter().flat_map(|&a| blk.iter().map(move |&b| op.apply(a, b))).collect())
                .collect();
            let np = (phase + 1) % per;
            if seen.insert((np, next.clone())) {
                queue.push_back((np, next, true));
            }
        }
    }
    let blocks: BTreeSet<Vec<usize>> = best.into_iter().map(|b| b.into_iter().collect()).collect();
    Partition::from_vecs(q, &blocks.into_iter().collect::<Vec<_>>()).unwrap()
}

fn golden_tables() -> Outcome {
    let expected: [(&str, BinaryOperation, bool, bool, bool); 6] = [
        ("irreducible4", tables::irreducible4(), true, false, false),
        ("wedge_remark8", tables::wedge_remark8(), true, false, false),
        ("residue_remark8", tables::residue_remark8(), true, false, false),
        ("not_strongly_ergodic4", tables::not_strongly_ergodic4(), true, true, false),
        ("strongly_ergodic4", tables::strongly_ergodic4(), true, true, true),
        ("cover_remark6", tables::cover_remark6(), true, true, false),
    ];
    let limits = Limits::default();
    for (name, op, irr, erg, se) in &expected {
        let got = (is_irreducible(op), is_ergodic(op), core(is_strongly_ergodic(op, &limits))?);
        ensure(got == (*irr, *erg, *se), || format!("{name}: flags {got:?}"))?;
    }
    ensure(!tables::strongly_ergodic4().is_quasigroup(), || "strongly_ergodic4 is a quasigroup".into())?;

    let op = tables::irreducible4();
    let h = p(4, &[&[0, 1], &[2], &[3]]);
    let h2 = step_partition(&op, &h).and_then(|g| step_partition(&op, &g));
    ensure(h2.as_ref() == Some(&h), || format!("H^2* = {h2:?}"))?;
    ensure(!h.is_balanced(), || "H is balanced".into())?;

    let k = core(first_residue(
        &tables::not_strongly_ergodic4(),
        &p(4, &[&[0, 1], &[2, 3]]),
        &limits,
    ))?;
    ensure(k == Partition::singletons(4), || format!("K_H = {k}"))?;

    let op = tables::wedge_remark8();
    let h1 = p(8, &[&[0, 1], &[2, 3], &[4, 5], &[6, 7]]);
    let h2 = p(8, &[&[0, 2], &[1, 3], &[4, 5], &[6, 7]]);
    let periods = (is_periodic_partition(&op, &h1).1, is_periodic_partition(&op, &h2).1);
    ensure(periods == (Some(1), Some(2)), || format!("periods {periods:?}"))?;
    let w = wedge(&h1, &h2);
    let printed = p(8, &[&[0], &[1], &[2], &[3], &[4, 5], &[6, 7]]);
    ensure(w == printed, || format!("wedge {w}"))?;
    ensure(is_periodic_partition(&op, &w).0 && !w.is_balanced(), || "wedge is stable".into())?;
    Ok("6 tables, 3 partition facts".into())
}

/// `H_{i,j} = {(j + i k, k)}` on `Z_n x Z_n`, with `(x, y)` at `x n + y`.
fn line_partition(n: usize, i: usize) -> Partition {
    let blocks: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..n).map(|k| ((j + i * k) % n) * n + k).collect())
        .collect();
    Partition::from_vecs(n * n, &blocks).unwrap()
}

fn affine_lines() -> Outcome {
    for n in 2..=4 {
        let op = affine_square(n);
        // the table from its formula, independent of the library constructor
        for a in 0..n * n {
            for b in 0..n * n {
                let (x1, y1, x2, y2) = (a / n, a % n, b / n, b % n);
                let c = ((x1 + y1 + x2 + y2) % n) * n + (y1 + y2) % n;
                ensure(op.apply(a, b) == c, || format!("n={n}: table differs at ({a},{b})"))?;
            }
        }
        ensure(op.is_quasigroup(), || format!("n={n}: not a quasigroup"))?;
        for i in 0..n {
            let next = as_family(&line_partition(n, (i + 1) % n));
            ensure(square_family(&op, &line_partition(n, i)) == next, || {
                format!("n={n}: H_{i}^* is not H_{}", (i + 1) % n)
            })?;
        }
        let h = line_partition(n, 0);
        let per = is_periodic_partition(&op, &h).1;
        ensure(per == Some(n), || format!("n={n}: period {per:?}"))?;
        ensure(uniform_block_size(&h) == Some(n), || format!("n={n}: unbalanced"))?;
        ensure(is_stable_partition(&op, &h), || format!("n={n}: not stable"))?;
    }
    Ok("n = 2, 3, 4".into())
}

fn oracle_equivalence() -> Outcome {
    let limits = Limits::default();
    let tables = uniformity_preserving_tables(3);
    let mut se = 0;
    for op in &tables {
        let theorem = core(is_strongly_ergodic(op, &limits))?;
        let oracle = match definitional_strong_ergodicity(op, 64, &limits) {
            Ok(b) => b,
            Err(Error::InconclusiveWithinBound(b)) => {
                return Err(format!("inconclusive at bound {b} for {:?}", op.rows()))
            }
            Err(e) => return Err(e.to_string()),
        };
        ensure(theorem == oracle, || format!("disagree on {:?}", op.rows()))?;
        se += usize::from(theorem);
    }
    Ok(format!("{} tables agree, {se} strongly ergodic", tables.len()))
}

fn latin_squares_strongly_ergodic() -> Outcome {
    let limits = Limits::default();
    let squares = latin_squares(4);
    ensure(squares.len() == 576, || format!("{} Latin squares", squares.len()))?;
    for op in &squares {
        ensure(core(is_strongly_ergodic(op, &limits))?, || format!("{:?}", op.rows()))?;
    }
    Ok("576 of 576".into())
}

fn inverse_closure() -> Outcome {
    let tables = uniformity_preserving_tables(3);
    for op in &tables {
        let inv = core(op.inverse_op())?;
        // x = (x * b) / b for every pair
        for a in 0..3 {
            for b in 0..3 {
                ensure(inv.apply(op.apply(a, b), b) == a, || format!("bad inverse of {:?}", op.rows()))?;
            }
        }
        ensure(is_irreducible(op) == is_irreducible(&inv), || format!("irreducible {:?}", op.rows()))?;
        ensure(is_ergodic(op) == is_ergodic(&inv), || format!("ergodic {:?}", op.rows()))?;
    }
    Ok(format!("{} tables", tables.len()))
}

fn product_equivalences() -> Outcome {
    let pool: Vec<(&str, BinaryOperation)> = vec![
        ("irreducible4", tables::irreducible4()),
        ("not_strongly_ergodic4", tables::not_strongly_ergodic4()),
        ("strongly_ergodic4", tables::strongly_ergodic4()),
        ("affine_square2", affine_square(2)),
        ("xor", xor()),
        ("xor_one", xor_one()),
        ("add_mod3", cyclic_group(3)),
    ];
    let limits = Limits::wide();
    let mut pairs = 0;
    for (na, a) in &pool {
        for (nb, b) in &pool {
            let (t, _) = core(tensor_ops(&[a.clone(), b.clone()], &limits))?;
            let qb = b.q();
            let brute = BinaryOperation::from_fn(a.q() * qb, |x, y| {
                a.apply(x / qb, y / qb) * qb + b.apply(x % qb, y % qb)
            });
            ensure(t == brute, || format!("{na} x {nb}: tensor table"))?;
            let check = core(check_product(&[a.clone(), b.clone()], &limits))?;
            for law in &check.laws {
                ensure(law.holds, || format!("{na} x {nb}: {}", law.name))?;
            }
            if is_ergodic(a) && is_ergodic(b) {
                let con = core(connectability(&t))?;
                let max = core(connectability(a))?.max(core(connectability(b))?);
                ensure(con == max, || format!("{na} x {nb}: con {con} vs {max}"))?;
            }
            pairs += 1;
        }
    }
    let x1 = xor_one();
    let (t, _) = core(tensor_ops(&[x1.clone(), x1.clone()], &limits))?;
    ensure(is_irreducible(&x1) && !is_irreducible(&t), || "x+1 pair".into())?;
    Ok(format!("{pairs} ordered pairs"))
}

fn product_structure() -> Outcome {
    let prod = core(ProductOperation::new(vec![xor(), xor()], &Limits::default()))?;
    // (a, b) sits at 2a + b
    let h = p(4, &[&[0, 3], &[1, 2]]);
    let d = core(prod.decompose(&h, &[0]))?;
    let singles = vec![vec![0], vec![1]];
    let whole = vec![vec![0, 1]];
    ensure(d.l_a == singles && d.l_b == singles, || format!("L {:?} {:?}", d.l_a, d.l_b))?;
    ensure(d.u_a == whole && d.u_b == whole, || format!("U {:?} {:?}", d.u_a, d.u_b))?;
    ensure(d.correlation == 2, || format!("correlation {}", d.correlation))?;
    let anti = d
        .blocks
        .iter()
        .find(|b| b.block == vec![1, 2])
        .ok_or("block {(0,1),(1,0)} missing")?;
    let mut pieces = anti.pieces.clone();
    pieces.sort();
    let printed = vec![(vec![0], vec![1]), (vec![1], vec![0])];
    ensure(pieces == printed, || format!("pieces {pieces:?}"))?;

    let stable = core(enumerate_stable_partitions(prod.op(), &Limits::default()))?;
    for h in &stable {
        let parts = core(prod.canonical_factorization(h))?;
        let count: usize = parts.iter().map(|f| f.len()).product();
        ensure(count == h.len(), || format!("{h}: factor sizes multiply to {count}"))?;
        // one point per factor block, taken in every combination
        let mut reps: Vec<Vec<usize>> = vec![vec![]];
        for f in &parts {
            reps = reps
                .iter()
                .flat_map(|r| {
                    f.blocks().iter().map(move |b| {
                        let mut r = r.clone();
                        r.push(b.first().unwrap());
                        r
                    })
                })
                .collect();
        }
        let section: Subset = reps.iter().map(|r| r[0] * 2 + r[1]).collect();
        ensure(is_section(h, section), || format!("{h}: product of sections"))?;
    }
    Ok(format!("{} stable partitions of the product", stable.len()))
}

fn residue_laws() -> Outcome {
    let limits = Limits::default();
    let golden = [
        tables::not_strongly_ergodic4(),
        tables::strongly_ergodic4(),
        tables::cover_remark6(),
        affine_square(2),
        affine_square(3),
    ];
    let mut checked = 0;
    for op in &golden {
        for h in core(enumerate_stable_partitions(op, &limits))? {
            let k = match first_residue(op, &h, &limits) {
                Err(e @ Error::ResidueVerificationFailed(_)) => return Err(e.to_string()),
                r => core(r)?,
            };
            ensure(k == residue_oracle(op, &h), || format!("{h}: K_H {k} differs from the oracle"))?;
            ensure(is_finer_partition(&k, &h), || format!("{h}: K_H not finer"))?;
            ensure(is_stable_partition(op, &k), || format!("{h}: K_H not stable"))?;
            let per = is_periodic_partition(op, &h).1.unwrap();
            let h_cycle = core(partition_cycle(op, &h))?;
            let k_cycle = core(partition_cycle(op, &k))?;
            for l in 0..=2 * per {
                let lhs = &k_cycle[l % k_cycle.len()];
                let rhs = core(first_residue(op, &h_cycle[l % per], &limits))?;
                ensure(*lhs == rhs, || format!("{h}: K^{l}* differs"))?;
            }
            core(residue_chain(op, &h, &limits))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} stable partitions"))
}

fn random_cover(rng: &mut ChaCha8Rng, q: usize) -> SubsetFamily {
    loop {
        let k = rng.gen_range(1..=6);
        let members: Vec<Subset> = (0..k).map(|_| Subset(rng.gen_range(1..1u16 << q))).collect();
        let f = SubsetFamily::new(q, members);
        if f.is_cover() {
            return f;
        }
    }
}

fn generated_partition_theorem() -> Outcome {
    let limits = Limits::default();
    let op = tables::strongly_ergodic4();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let total = 24;
    let mut misses = vec![];
    for _ in 0..total {
        let a = random_cover(&mut rng, 4);
        let r = core(cover_orbit_analysis(&op, &a, &limits))?;
        if r.witness.is_none() {
            misses.push(a.to_vecs());
        }
    }

    let a = SubsetFamily::from_vecs(6, &tables::cover_remark6_family()).unwrap();
    let remark = core(cover_orbit_search(&tables::cover_remark6(), &a, &limits))?;
    ensure(remark.witness.is_none(), || "printed 6x6 cover reaches its generated partition".into())?;

    ensure(misses.is_empty(), || {
        format!(
            "{} of {total} random covers never reach <A>, first {:?}; the printed 6x6 cover never does, as stated",
            misses.len(),
            misses[0]
        )
    })?;
    Ok(format!("{total} random covers reach <A>; printed 6x6 cover never does"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden tables", golden_tables, Duration::from_secs(1)),
        ("affine line partitions", affine_lines, Duration::from_secs(1)),
        ("oracle equivalence at q=3", oracle_equivalence, Duration::from_secs(60)),
        ("Latin squares of order 4", latin_squares_strongly_ergodic, Duration::from_secs(300)),
        ("inverse closure at q=3", inverse_closure, Duration::from_secs(10)),
        ("product equivalences", product_equivalences, Duration::from_secs(30)),
        ("product structure", product_structure, Duration::from_secs(10)),
        ("residue chain laws", residue_laws, Duration::from_secs(60)),
        ("generated partition theorem", generated_partition_theorem, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *budget => Err(format!("took {elapsed:.2?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
