//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zigzag_core::assembly::{
    assemble, assemble_gluing, corrected_extension, single_entry_mutants, verify_gluing, verify_shadow_compat,
    GluingBlock, NodeDatum,
};
use zigzag_core::exec::Execution;
use zigzag_core::extension::{
    class_grid, classify_selfdual_rank_one, extension_class, make_extension, self_duality, ClassInput, ExtCertificate,
};
use zigzag_core::linalg::{block_assemble, QMatrix, Rational};
use zigzag_core::monodromy::{
    nilpotent_log, pl_operator, unipotent_exp, weight_filtration, NilpotentOperator, Pairing,
};
use zigzag_core::skeleton::{skeleton_of, to_dot};
use zigzag_core::tables::{table_one, table_two, OPEN_LABEL};
use zigzag_core::zigzag::random::random_valid;
use zigzag_core::zigzag::{
    compressed_shape, direct_sum, dualize, is_isomorphic, std_corrected, std_ic, std_skyscraper, MultiZigZag, ZigZag,
};
use zigzag_core::zzl::{parse, serialize};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn table_one_exact() -> Outcome {
    let zero = |r, c| QMatrix::zeros(r, c);
    let id = |n| QMatrix::identity(n);
    let expected_ic = ZigZag::new(OPEN_LABEL, 1, 1, zero(0, 1), zero(0, 0), zero(1, 0)).unwrap();
    let expected_sky = ZigZag::new("0", 0, 0, zero(1, 0), id(1), zero(0, 1)).unwrap();
    let expected_p = ZigZag::new(OPEN_LABEL, 1, 1, zero(1, 1), id(1), zero(1, 1)).unwrap();
    ensure(std_ic(OPEN_LABEL, 1, 1) == expected_ic, "IC row")?;
    ensure(std_skyscraper(1).unwrap() == expected_sky, "skyscraper row")?;
    ensure(std_corrected(OPEN_LABEL, 1, 1) == expected_p, "corrected row")?;
    for r in 1..=5 {
        let labels: Vec<String> = (1..=r).map(|k| format!("p{k}")).collect();
        let total = MultiZigZag::skyscrapers(&labels).unwrap().total();
        let expected = ZigZag::new("0", 0, 0, zero(r, 0), id(r), zero(0, r)).unwrap();
        ensure(total == expected, format!("{r}-fold multi-node sum"))?;
        let t = table_one(r);
        ensure(t.verified() && t.rows.len() == 4, format!("table with r = {r}:\n{t}"))?;
    }
    let t = table_one(3);
    let tuples: Vec<&str> = t.rows.iter().take(3).map(|r| r.zigzag.as_str()).collect();
    ensure(
        tuples == ["(Q_U[3], 0, 0, 0, 0, 0)", "(0, Q, Q, 0, id, 0)", "(Q_U[3], Q, Q, 0, id, 0)"],
        format!("tuples {tuples:?}"),
    )?;
    Ok("4 rows exact for r = 1..5".into())
}

fn table_two_exact() -> Outcome {
    let t = table_two();
    ensure(t.verified() && t.rows.len() == 3, format!("{t}"))?;
    let sky = std_skyscraper(1).unwrap();
    let mut blocks = 0;
    for (b, sub) in [(1, std_corrected(OPEN_LABEL, 1, 1)), (2, direct_sum(&std_corrected(OPEN_LABEL, 1, 1), &std_corrected(OPEN_LABEL, 0, 0)))] {
        for c in [0, 1, -2] {
            let u = QMatrix::from_fn(b, 1, |i, _| if i == 0 { q(c) } else { q(0) });
            let e = make_extension(sub.clone(), sky.clone(), ClassInput::Block(u.clone())).map_err(|e| e.to_string())?;
            let expected = block_assemble([[Some(sub.beta()), Some(&u)], [None, Some(&QMatrix::identity(1))]], [b, 1], [b, 1])
                .map_err(|e| e.to_string())?;
            ensure(e.beta_block() == expected, format!("beta block for B = {b}, u = {c}"))?;
            blocks += 1;
        }
    }
    let split = make_extension(std_ic(OPEN_LABEL, 1, 1), sky.clone(), ClassInput::Scalar(q(0))).unwrap();
    let corrected = make_extension(std_ic(OPEN_LABEL, 1, 1), sky, ClassInput::Scalar(q(1))).unwrap();
    ensure(
        compressed_shape(&split.total()) == compressed_shape(&corrected.total()),
        "split and corrected compressed shapes differ",
    )?;
    let (cs, cc) = (extension_class(&split).normalized, extension_class(&corrected).normalized);
    ensure(cs == q(0) && cc == q(1), format!("normalized classes {cs} and {cc}"))?;
    Ok(format!("{blocks} beta blocks; equal shapes, normalized classes 0 and 1"))
}

fn self_duality_checks() -> Outcome {
    for (name, z) in [
        ("IC", std_ic(OPEN_LABEL, 1, 1)),
        ("skyscraper", std_skyscraper(1).unwrap()),
        ("corrected", std_corrected(OPEN_LABEL, 1, 1)),
    ] {
        let d = dualize(&z);
        let v = is_isomorphic(&d, &z).map_err(|e| e.to_string())?;
        ensure(v.isomorphic, format!("{name} is not self-dual"))?;
        ensure(v.witness().is_some_and(|w| w.verify(&d, &z)), format!("{name}: witness"))?;
    }
    let corrected = make_extension(std_ic(OPEN_LABEL, 1, 1), std_skyscraper(1).unwrap(), ClassInput::Scalar(q(1))).unwrap();
    ensure(self_duality(&corrected).is_ok_and(|s| s.self_dual), "corrected presentation")?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..200 {
        let z = random_valid(&mut rng, 4);
        ensure(z.dims().iter().all(|&d| d <= 4) && z.is_valid(), format!("sample {k} out of range"))?;
        let dd = dualize(&dualize(&z));
        let v = is_isomorphic(&dd, &z).map_err(|e| e.to_string())?;
        ensure(v.isomorphic, format!("sample {k}: D(D(z)) not isomorphic to z"))?;
        ensure(v.witness().is_some_and(|w| w.verify(&dd, &z)), format!("sample {k}: witness"))?;
    }
    Ok("3 standard objects, 200 random double duals with verified witnesses".into())
}

fn classification() -> Outcome {
    let grid = class_grid();
    let mut summaries = Vec::new();
    for exec in [Execution::Sequential, Execution::Parallel] {
        let c = classify_selfdual_rank_one(OPEN_LABEL, (1, 1), &grid, exec).map_err(|e| e.to_string())?;
        ensure(c.classes.len() == 2, format!("{} classes", c.classes.len()))?;
        ensure(c.non_split().len() == 1, format!("{} non-split classes", c.non_split().len()))?;
        ensure(c.pairs.len() == grid.len() * grid.len(), "missing pairwise verdicts")?;
        for p in &c.pairs {
            let certified = match &p.certificate {
                ExtCertificate::Witness => p.isomorphic,
                ExtCertificate::ShapeMismatch(_) | ExtCertificate::VanishingDeterminant(_) => !p.isomorphic,
            };
            ensure(certified, format!("{} vs {}: uncertified verdict", p.left, p.right))?;
            ensure(p.isomorphic == (p.left.is_zero() == p.right.is_zero()), format!("{} vs {}", p.left, p.right))?;
        }
        summaries.push(c);
    }
    ensure(summaries[0] == summaries[1], "sequential and parallel results differ")?;
    Ok(format!("2 classes, 1 non-split, {} certified verdicts", summaries[0].pairs.len()))
}

fn gluing_relation() -> Outcome {
    let mut mutants = 0;
    let mut killed = 0;
    for r in 1..=3usize {
        let nodes: Vec<(String, GluingBlock)> = (1..=r as i64)
            .map(|k| {
                let u = QMatrix::from_i64(&[&[k, 1]]);
                let v = QMatrix::from_i64(&[&[1], &[-k]]);
                (format!("p{k}"), GluingBlock { u, v })
            })
            .collect();
        let ranges: Vec<_> = (0..r).map(|k| 2 * k..2 * k + 2).collect();
        let g = assemble_gluing(&nodes, 2 * r, &ranges, None).map_err(|e| e.to_string())?;
        ensure(g.n == &g.v * &g.u, format!("r = {r}: N != v u"))?;
        ensure((&g.n * &g.n).is_zero(), format!("r = {r}: N^2 != 0"))?;
        let report = verify_gluing(&g);
        ensure(report.passed(), format!("r = {r}:\n{report}"))?;
        for (name, m) in single_entry_mutants(&g) {
            mutants += 1;
            if verify_gluing(&m).passed() {
                return Err(format!("r = {r}: mutant {name} survives"));
            }
            killed += 1;
        }
    }
    ensure(mutants >= 50, format!("only {mutants} mutants"))?;
    Ok(format!("r = 1..3 pass; {killed}/{mutants} mutants killed"))
}

fn shadow_compatibility() -> Outcome {
    let mut cases = 0;
    let mut controls = 0;
    for r in 1..=5usize {
        let labels: Vec<String> = (1..=r).map(|k| format!("p{k}")).collect();
        for mask in 0..(1u32 << r) {
            let classes: Vec<Rational> = (0..r).map(|k| q(((mask >> k) & 1) as i64)).collect();
            let nodes = labels
                .iter()
                .zip(&classes)
                .map(|(l, c)| NodeDatum::odp(l.clone(), OPEN_LABEL, c.clone()))
                .collect();
            let s = assemble("bulk", OPEN_LABEL, nodes).map_err(|e| e.to_string())?;
            let report = verify_shadow_compat(&s, Execution::default());
            ensure(report.passed(), format!("r = {r}, mask {mask:b}:\n{report}"))?;
            cases += 1;

            let mut flipped = classes.clone();
            flipped[0] = q(1) - &flipped[0];
            let mut reversed = labels.clone();
            reversed.reverse();
            let mut bad = vec![
                corrected_extension(OPEN_LABEL, (r, r), &labels, &flipped),
                corrected_extension(OPEN_LABEL, (r + 1, r), &labels, &classes),
                corrected_extension(OPEN_LABEL, (r, r), &labels[1..], &classes[1..]),
            ];
            if r >= 2 {
                bad.push(corrected_extension(OPEN_LABEL, (r, r), &reversed, &classes));
            }
            for shadow in bad {
                let shadow = shadow.map_err(|e| e.to_string())?;
                if verify_shadow_compat(&s.with_shadow_unchecked(shadow), Execution::Sequential).passed() {
                    return Err(format!("r = {r}, mask {mask:b}: negative control passes"));
                }
                controls += 1;
            }
        }
    }
    ensure(cases == 62, format!("{cases} cases"))?;
    Ok(format!("{cases} class vectors pass, {controls} negative controls fail"))
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n.min(max))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn monodromy() -> Outcome {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let dim = rng.random_range(1..=6usize);
        let mut g = QMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let x = q(rng.random_range(-3..=3));
                g.set(j, i, -&x);
                g.set(i, j, x);
            }
        }
        let pairing = Pairing::new(g).map_err(|e| e.to_string())?;
        let delta: Vec<Rational> = (0..dim).map(|_| q(rng.random_range(-2..=2))).collect();
        let t = pl_operator(&delta, &pairing).map_err(|e| e.to_string())?;
        let d = &t - &QMatrix::identity(dim);
        ensure((&d * &d).is_zero(), format!("pairing {k}: (T - I)^2 != 0"))?;
    }
    let mut unipotent = 0;
    for dim in 1..=4usize {
        let slots: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
        for code in 0..3usize.pow(slots.len() as u32) {
            let mut t = QMatrix::identity(dim);
            let mut c = code;
            for &(i, j) in &slots {
                t.set(i, j, q((c % 3) as i64 - 1));
                c /= 3;
            }
            let n = nilpotent_log(&t).map_err(|e| e.to_string())?;
            ensure(unipotent_exp(&n) == t, format!("exp(log T) != T for {t}"))?;
            unipotent += 1;
        }
    }
    let mut types = 0;
    for dim in 0..=6usize {
        for blocks in partitions(dim, dim) {
            let mut n = QMatrix::zeros(dim, dim);
            let mut off = 0;
            for &b in &blocks {
                for i in 1..b {
                    n.set(off + i - 1, off + i, q(1));
                }
                off += b;
            }
            let op = NilpotentOperator::new(n).map_err(|e| e.to_string())?;
            let w = weight_filtration(&op, 0).map_err(|e| e.to_string())?;
            let v = w.violations(&op);
            ensure(v.is_empty(), format!("Jordan type {blocks:?}: {v:?}"))?;
            types += 1;
        }
    }
    Ok(format!("100 pairings, {unipotent} unipotent matrices, {types} Jordan types"))
}

fn skeleton() -> Outcome {
    for r in 0..=5usize {
        let nodes = (1..=r).map(|k| NodeDatum::odp(format!("p{k}"), OPEN_LABEL, q(1))).collect();
        let s = assemble("bulk", OPEN_LABEL, nodes).map_err(|e| e.to_string())?;
        let k = skeleton_of(&s);
        ensure(k.vertex_count() == r + 1 && k.edge_count() == 2 * r, format!("r = {r} counts"))?;
        ensure(to_dot(&k) == to_dot(&skeleton_of(&s)), format!("r = {r}: DOT differs between runs"))?;
    }
    let cli = Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/tests");
    let text = std::fs::read_to_string(cli.join("fixtures/three_nodes.zzl")).map_err(|e| e.to_string())?;
    let golden = std::fs::read_to_string(cli.join("golden/three_nodes.dot")).map_err(|e| e.to_string())?;
    let doc = parse(&text).map_err(|d| format!("{d:?}"))?;
    let dot = to_dot(&skeleton_of(doc.node_datum().ok_or("fixture has no nodes")?));
    ensure(dot == golden, "r = 3 output differs from the golden file")?;
    let g = common::read_dot(&golden).ok_or("golden file is not readable")?;
    ensure(g.vertices.len() == 4 && g.edges.len() == 6, "golden file is not 4 vertices / 6 edges")?;
    Ok("counts for r = 0..5, deterministic DOT, golden file matches".into())
}

fn format_checks() -> Outcome {
    let mut round_trips = 0;
    for path in common::corpus() {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let Ok(doc) = parse(&text) else { continue };
        let again = parse(&serialize(&doc)).map_err(|d| format!("{}: {d:?}", path.display()))?;
        ensure(again == doc, format!("{}: round trip differs", path.display()))?;
        round_trips += 1;
    }
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let inputs = common::fuzz_inputs(10_000, 9);
    let mut diagnosed = 0;
    let mut failure = None;
    for input in &inputs {
        match common::fuzz_one(input) {
            common::FuzzResult::Parsed => {}
            common::FuzzResult::Diagnosed => diagnosed += 1,
            common::FuzzResult::Unpositioned(d) => {
                failure = Some(format!("unpositioned diagnostic {d}"));
                break;
            }
            common::FuzzResult::Panicked => {
                failure = Some(format!("panic on {:?}", String::from_utf8_lossy(input)));
                break;
            }
        }
    }
    std::panic::set_hook(hook);
    if let Some(f) = failure {
        return Err(f);
    }
    Ok(format!(
        "{round_trips} fixtures round-trip; {} fuzz inputs, {diagnosed} diagnosed, all positioned",
        inputs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("table 1 reproduction", table_one_exact),
        ("table 2 reproduction", table_two_exact),
        ("self-duality", self_duality_checks),
        ("uniqueness of the self-dual class", classification),
        ("gluing relation", gluing_relation),
        ("shadow compatibility", shadow_compatibility),
        ("monodromy formulas", monodromy),
        ("skeleton", skeleton),
        ("format", format_checks),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{ms} ms]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{ms} ms]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
