//! Acceptance gate: one line per criterion, then a single verdict.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use common::*;
use compomat::double::{
    core_groupoid, enumerate_squares, equivalent_conditions, horizontal_product, interchange_check, invert_square,
    is_commutative, unit_square_of, vertical_product, Direction, Square, DEFAULT_SQUARE_CAP,
};
use compomat::fixtures::{
    self, axiom_mutations, check_commuting_condition, conjugacy_conditions, crystalline_default, cycle_a, cycle_s,
    random_composite, standard_group_pool, triclinic_composite, triclinic_default, GroupTable, TriclinicParams,
};
use compomat::groupoid::{Arrow, FiniteGroupoid};
use compomat::jet::{signed_permutations, RationalMatrix3};
use compomat::material::{build_material_groupoid, change_reference, Composite, ResponseRegistry};
use compomat::rational::Rational;
use compomat::uniformity::{classify_composite, is_strongly_uniform, triclinic_search, TriclinicSearchSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m(a: &Arrow) -> &RationalMatrix3 {
    a.as_matrix().unwrap()
}

fn axioms_pass(name: &str, g: &FiniteGroupoid) -> Result<(), String> {
    let r = g.check_axioms();
    ensure(r.passed, || format!("{name}: {:?}", r.violations.first()))
}

fn random_composites(count: u64, max_points: u64, salt: u64) -> Vec<Composite> {
    let pool = standard_group_pool();
    (0..count).map(|s| random_composite(salt + s, (1 + s % max_points) as usize, &pool)).collect()
}

fn criterion_1() -> Outcome {
    let mut fixtures_checked = 0;
    for n in 1..=5 {
        axioms_pass(&format!("pair({n})"), &fixtures::pair_groupoid(n))?;
        fixtures_checked += 1;
    }
    for t in [GroupTable::cyclic(1), GroupTable::cyclic(3), GroupTable::cyclic(6), GroupTable::symmetric3()] {
        axioms_pass("group", &fixtures::group_as_groupoid(&t).map_err(|e| e.to_string())?)?;
        fixtures_checked += 1;
    }
    for (name, c) in [
        ("crystalline", crystalline_default()),
        ("triclinic", triclinic_default()),
        ("pair composite", fixtures::pair_composite(4)),
    ] {
        axioms_pass(name, c.omega1())?;
        axioms_pass(name, c.omega2())?;
        fixtures_checked += 2;
    }
    for seed in 0..10 {
        axioms_pass("action groupoid", &fixtures::random_action_groupoid(seed))?;
        fixtures_checked += 1;
    }

    let composites = random_composites(200, 8, 1000);
    let mut largest = 0;
    for (i, c) in composites.iter().enumerate() {
        largest = largest.max(c.omega1().len()).max(c.omega2().len());
        ensure(c.objects().len() <= 8, || format!("random composite {i} has too many points"))?;
        axioms_pass(&format!("random composite {i} omega1"), c.omega1())?;
        axioms_pass(&format!("random composite {i} omega2"), c.omega2())?;
    }
    ensure(largest <= 400, || format!("a random material has {largest} arrows"))?;

    let mutations = axiom_mutations();
    ensure(mutations.len() == 20, || format!("{} mutations", mutations.len()))?;
    for mu in &mutations {
        let r = mu.groupoid.check_axioms();
        ensure(!r.passed && r.has(mu.expected), || {
            format!("mutation {:?} expected {:?}, got {:?}", mu.name, mu.expected, r.violations.iter().map(|v| v.axiom).collect::<Vec<_>>())
        })?;
    }
    Ok(format!(
        "{fixtures_checked} fixture groupoids and 200 random composites (largest material {largest} arrows) pass; 20/20 mutations flagged with the expected axiom"
    ))
}

fn criterion_2() -> Outcome {
    let mut sources = vec![crystalline_default()];
    let pool = standard_group_pool();
    sources.extend((0..50).map(|s| random_composite(2000 + s, 2 + (s % 2) as usize, &pool)));
    let mut total = 0usize;
    let mut commutative = 0usize;
    for (i, c) in sources.iter().enumerate() {
        let all = enumerate_squares(c, false, DEFAULT_SQUARE_CAP).map_err(|e| e.to_string())?;
        for sq in &all.squares {
            let conds = equivalent_conditions(sq);
            ensure(conds.iter().all(|&b| b == conds[0]), || format!("composite {i}: conditions disagree on {sq:?}"))?;
            commutative += usize::from(conds[0]);
        }
        total += all.len();
    }
    ensure(total >= 10_000, || format!("only {total} squares"))?;
    Ok(format!("{total} squares ({commutative} commutative), zero disagreements among the four conditions"))
}

struct SquareIndex<'a> {
    by_left: HashMap<&'a Arrow, Vec<&'a Square>>,
    by_top: HashMap<&'a Arrow, Vec<&'a Square>>,
    all: BTreeSet<&'a Square>,
}

impl<'a> SquareIndex<'a> {
    fn new(squares: &'a [Square]) -> Self {
        let mut by_left: HashMap<&Arrow, Vec<&Square>> = HashMap::new();
        let mut by_top: HashMap<&Arrow, Vec<&Square>> = HashMap::new();
        for s in squares {
            by_left.entry(&s.left).or_default().push(s);
            by_top.entry(&s.top).or_default().push(s);
        }
        Self { by_left, by_top, all: squares.iter().collect() }
    }

    fn right_of(&self, s: &Square) -> &[&'a Square] {
        self.by_left.get(&s.right).map_or(&[], Vec::as_slice)
    }

    fn below(&self, s: &Square) -> &[&'a Square] {
        self.by_top.get(&s.bottom).map_or(&[], Vec::as_slice)
    }
}

fn unit_and_inverse_laws(s: &Square) -> Result<(), String> {
    let fail = |law: &str| format!("{law} fails on {s:?}");
    let vp = |a: &Square, b: &Square| vertical_product(a, b).map_err(|e| e.to_string());
    let hp = |a: &Square, b: &Square| horizontal_product(a, b).map_err(|e| e.to_string());
    ensure(vp(s, &unit_square_of(Direction::Vertical, &s.right))? == *s, || fail("right vertical unit"))?;
    ensure(vp(&unit_square_of(Direction::Vertical, &s.left), s)? == *s, || fail("left vertical unit"))?;
    ensure(hp(s, &unit_square_of(Direction::Horizontal, &s.bottom))? == *s, || fail("lower horizontal unit"))?;
    ensure(hp(&unit_square_of(Direction::Horizontal, &s.top), s)? == *s, || fail("upper horizontal unit"))?;
    let iv = invert_square(s, Direction::Vertical);
    let ih = invert_square(s, Direction::Horizontal);
    ensure(is_commutative(&iv) && is_commutative(&ih), || fail("inverse commutativity"))?;
    ensure(vp(s, &iv)? == unit_square_of(Direction::Vertical, &s.left), || fail("vertical inverse"))?;
    ensure(vp(&iv, s)? == unit_square_of(Direction::Vertical, &s.right), || fail("vertical inverse (left)"))?;
    ensure(hp(s, &ih)? == unit_square_of(Direction::Horizontal, &s.top), || fail("horizontal inverse"))?;
    ensure(hp(&ih, s)? == unit_square_of(Direction::Horizontal, &s.bottom), || fail("horizontal inverse (left)"))?;
    Ok(())
}

fn block(idx: &SquareIndex, g: &Square, h: &Square, a: &Square, b: &Square) -> Result<(), String> {
    ensure(interchange_check(g, h, a, b).map_err(|e| e.to_string())?, || format!("interchange fails on {g:?} {h:?} {a:?} {b:?}"))?;
    // products of commutative squares stay commutative (and in the set)
    let gh = vertical_product(g, h).map_err(|e| e.to_string())?;
    let ga = horizontal_product(g, a).map_err(|e| e.to_string())?;
    ensure(idx.all.contains(&gh) && idx.all.contains(&ga), || "product left the commutative squares".into())
}

fn criterion_3() -> Outcome {
    let cry = crystalline_default();
    let squares = enumerate_squares(&cry, true, DEFAULT_SQUARE_CAP).map_err(|e| e.to_string())?.squares;
    let idx = SquareIndex::new(&squares);
    let (mut vertical_pairs, mut horizontal_pairs, mut blocks) = (0usize, 0usize, 0usize);
    for s in &squares {
        unit_and_inverse_laws(s)?;
        for t in idx.right_of(s) {
            let p = vertical_product(s, t).map_err(|e| e.to_string())?;
            ensure(idx.all.contains(&p), || format!("vertical product of {s:?} and {t:?} is not commutative"))?;
            vertical_pairs += 1;
        }
        for t in idx.below(s) {
            let p = horizontal_product(s, t).map_err(|e| e.to_string())?;
            ensure(idx.all.contains(&p), || format!("horizontal product of {s:?} and {t:?} is not commutative"))?;
            horizontal_pairs += 1;
        }
    }
    for g in &squares {
        for h in idx.right_of(g) {
            for a in idx.below(g) {
                for b in idx.right_of(a).iter().filter(|b| b.top == h.bottom) {
                    block(&idx, g, h, a, b)?;
                    blocks += 1;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sampled = 0usize;
    let mut attempts = 0usize;
    let pool = standard_group_pool();
    let composites: Vec<(Composite, Vec<Square>)> = (0..20)
        .map(|s| {
            let c = random_composite(3000 + s, 2 + (s % 2) as usize, &pool);
            let sq = enumerate_squares(&c, true, DEFAULT_SQUARE_CAP).unwrap().squares;
            (c, sq)
        })
        .collect();
    let indices: Vec<SquareIndex> = composites.iter().map(|(_, sq)| SquareIndex::new(sq)).collect();
    while sampled < 10_000 {
        attempts += 1;
        ensure(attempts < 1_000_000, || "could not sample enough blocks".into())?;
        let k = rng.gen_range(0..composites.len());
        let (squares, idx) = (&composites[k].1, &indices[k]);
        let g = &squares[rng.gen_range(0..squares.len())];
        let hs = idx.right_of(g);
        let as_ = idx.below(g);
        if hs.is_empty() || as_.is_empty() {
            continue;
        }
        let h = hs[rng.gen_range(0..hs.len())];
        let a = as_[rng.gen_range(0..as_.len())];
        let bs: Vec<&&Square> = idx.right_of(a).iter().filter(|b| b.top == h.bottom).collect();
        if bs.is_empty() {
            continue;
        }
        let b = bs[rng.gen_range(0..bs.len())];
        unit_and_inverse_laws(g)?;
        block(idx, g, h, a, b)?;
        sampled += 1;
    }
    Ok(format!(
        "crystalline: {} squares, {vertical_pairs} vertical and {horizontal_pairs} horizontal pairs, {blocks} blocks; random: {sampled} sampled blocks; zero failures",
        squares.len()
    ))
}

/// Core arrows are the pairs `(top, left)` of equal matrices in both
/// materials, composed componentwise.
fn core_matches_oracle(name: &str, c: &Composite) -> Result<usize, String> {
    let k = core_groupoid(c).map_err(|e| e.to_string())?;
    axioms_pass(&format!("core of {name}"), &k.groupoid)?;
    let mut expected = BTreeSet::new();
    for &x in c.objects() {
        for &y in c.objects() {
            for t in c.omega1().hom(x, y) {
                for l in c.omega2().hom(x, y) {
                    if m(t) == m(l) {
                        expected.insert((t.clone(), l.clone()));
                    }
                }
            }
        }
    }
    let got: BTreeSet<(Arrow, Arrow)> = k.squares().map(|(_, s)| (s.top.clone(), s.left.clone())).collect();
    ensure(got == expected, || format!("{name}: core arrows differ from the oracle ({} vs {})", got.len(), expected.len()))?;
    let arrows = k.groupoid.arrows();
    for k1 in arrows {
        for k2 in arrows.iter().filter(|k2| k2.dst == k1.src) {
            let prod = k.groupoid.compose(k1, k2).map_err(|e| e.to_string())?;
            let (s1, s2, sp) = (k.square(k1).unwrap(), k.square(k2).unwrap(), k.square(&prod).unwrap());
            ensure(*m(&sp.top) == m(&s1.top).mul(m(&s2.top)) && *m(&sp.left) == m(&s1.left).mul(m(&s2.left)), || {
                format!("{name}: core product differs from componentwise composition")
            })?;
        }
    }
    Ok(got.len())
}

fn criterion_4() -> Outcome {
    let mut checked = vec![
        ("crystalline".to_string(), crystalline_default()),
        ("triclinic".to_string(), triclinic_default()),
        ("pair(3)".to_string(), fixtures::pair_composite(3)),
    ];
    checked.extend(random_composites(50, 4, 4000).into_iter().enumerate().map(|(i, c)| (format!("random {i}"), c)));
    let mut arrows = 0;
    for (name, c) in &checked {
        arrows += core_matches_oracle(name, c)?;
    }
    Ok(format!("{} composites, {arrows} core arrows, all match the componentwise oracle and pass the axioms", checked.len()))
}

fn criterion_5() -> Outcome {
    let mut checked = vec![("crystalline".to_string(), crystalline_default()), ("triclinic".to_string(), triclinic_default())];
    checked.extend((1..=4).map(|n| (format!("pair({n})"), fixtures::pair_composite(n))));
    checked.extend(random_composites(100, 4, 5000).into_iter().enumerate().map(|(i, c)| (format!("random {i}"), c)));
    let mut relations = 0;
    let mut distinct_truth = BTreeSet::new();
    for (name, c) in &checked {
        let r = classify_composite(c).map_err(|e| e.to_string())?;
        for cc in &r.crosschecks {
            ensure(cc.applicable && cc.agree, || format!("{name}: {} (lhs {}, rhs {})", cc.id, cc.lhs, cc.rhs))?;
            distinct_truth.insert((cc.id, cc.lhs));
            relations += 1;
        }
    }
    Ok(format!(
        "{} composites, {relations} relation checks all agree; {} (relation, lhs value) combinations exercised",
        checked.len(),
        distinct_truth.len()
    ))
}

fn criterion_6() -> Outcome {
    let cry = crystalline_default();
    let r = classify_composite(&cry).map_err(|e| e.to_string())?;
    ensure(r.uniform.holds, || "crystalline composite is not uniform".into())?;
    ensure(!r.strongly_uniform.holds, || "crystalline composite is strongly uniform".into())?;

    // the pair that strong uniformity actually trips on
    let cx = is_strongly_uniform(&cry).counterexample.unwrap();
    let side = |role: &str| cx.arrows.iter().find(|(r, _)| r == role).map(|(_, a)| m(a).clone()).unwrap();
    let (g, h) = (side("bottom"), side("right"));
    let trip = conjugacy_conditions(&g, &h);
    let trip_note = format!(
        "strong uniformity fails at (A{}, S{}) where ii/iii/v/vi = {}/{}/{}/{}",
        if g == cycle_a() { "" } else { "^2" },
        if h == cycle_s() { "" } else { "^2" },
        trip.ii,
        trip.iii,
        trip.v,
        trip.vi
    );
    ensure(!trip.any(), || format!("{trip_note}, yet a condition holds"))?;

    let c = conjugacy_conditions(&cycle_a(), &cycle_s());
    let listed = format!("for (A, S) ii/iii/v/vi = {}/{}/{}/{}", c.ii, c.iii, c.v, c.vi);
    ensure(!(c.ii || c.iii || c.v || c.vi), || {
        format!("uniform and not strongly uniform as required, but {listed}: A S^-1 A = S holds, so condition ii does not fail; {trip_note}")
    })?;
    Ok(format!("uniform, not strongly uniform; {listed}; {trip_note}"))
}

fn criterion_7() -> Outcome {
    let sp = signed_permutations();
    let id = RationalMatrix3::identity();
    let same = vec![sp[5].clone(), sp[20].clone(), sp[33].clone()];
    let p = TriclinicParams { implants1: same.clone(), implants2: same };
    ensure(check_commuting_condition(&p, false).holds, || "equal implants fail the condition".into())?;
    ensure(
        triclinic_composite(&p).map_err(|e| e.to_string())?.omega1().same_arrows(triclinic_composite(&p).unwrap().omega2()),
        || "equal implants give different materials".into(),
    )?;
    let p = TriclinicParams {
        implants1: vec![id.clone(); 3],
        implants2: vec![id.clone(), cycle_a(), cycle_a().pow(2)],
    };
    let check = check_commuting_condition(&p, false);
    let [x, y, _] = check.failing.ok_or("identity against non-constant implants passes")?;
    ensure(!check.holds && x == y, || "the failing triple does not have X = Y".into())?;

    let diag: Vec<RationalMatrix3> =
        sp.iter().filter(|m| (0..3).all(|i| (0..3).all(|j| i == j || m.entry(i, j).is_zero()))).cloned().collect();
    let mut spaces: Vec<TriclinicSearchSpace> = (2..=4)
        .map(|n| TriclinicSearchSpace { n_points: n, pool_name: "signed_permutations".into(), pool: sp.clone() })
        .collect();
    spaces.push(TriclinicSearchSpace { n_points: 5, pool_name: "sign_diagonals".into(), pool: diag });
    let report = triclinic_search(&spaces).map_err(|e| e.to_string())?;
    let expected: usize = spaces.iter().map(|s| s.pool.len().pow(s.n_points as u32 - 1)).sum();
    ensure(report.findings.len() == expected, || "search did not cover every instance".into())?;

    let mut tsv = String::from("n_points\tpool\timplants\tuniform\tcompletely_non_uniform\tcommuting_distinct\tweak_midpoint\tweak_corners\n");
    for f in &report.findings {
        let idx: Vec<String> = f.implant_indices.iter().map(|i| i.to_string()).collect();
        writeln!(
            tsv,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            f.n_points,
            f.pool_name,
            idx.join(","),
            f.uniform,
            f.completely_non_uniform,
            f.commuting_distinct,
            f.weak_midpoint,
            f.weak_corners
        )
        .unwrap();
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_triclinic_findings.tsv");
    std::fs::write(&path, tsv).map_err(|e| e.to_string())?;
    Ok(format!(
        "degenerate checks hold; {} instances searched, {} completely non-uniform, {} of those satisfy the distinct-point condition; \
         claim realized by {} (corners) and {} (midpoint) instances; findings in {}",
        report.findings.len(),
        report.count(|f| f.completely_non_uniform),
        report.count(|f| f.completely_non_uniform && f.commuting_distinct),
        report.count(|f| f.realizes_claim_corners()),
        report.count(|f| f.realizes_claim_midpoint()),
        path.display()
    ))
}

fn criterion_8() -> Outcome {
    let body = compomat::groupoid::Body::numbered(4);
    let w = ResponseRegistry::default()
        .build("W", "det", body.clone(), &Default::default(), None)
        .map_err(|e| e.to_string())?;
    let sp = signed_permutations();
    let candidates: Vec<Arrow> = body
        .objects()
        .flat_map(|x| body.objects().map(move |y| (x, y)))
        .flat_map(|(x, y)| sp.iter().map(move |p| Arrow::matrix(x, y, p.clone())))
        .collect();
    let oracle: BTreeSet<Arrow> = candidates.iter().filter(|a| m(a).determinant().is_one()).cloned().collect();
    let g = build_material_groupoid(&w, candidates, &Rational::zero()).map_err(|e| e.to_string())?;
    let got: BTreeSet<Arrow> = g.groupoid.arrows().iter().cloned().collect();
    ensure(got == oracle, || format!("accepted {} arrows, determinant filter gives {}", got.len(), oracle.len()))?;
    for x in body.objects() {
        for y in body.objects() {
            ensure(g.groupoid.hom_len(x, y) == 24, || "a pair does not have 24 accepted matrices".into())?;
        }
    }

    let c01 = RationalMatrix3::from_integers([[2, 1, 0], [0, 1, 0], [1, 0, 3]]);
    let back = change_reference(&change_reference(&w, &c01).map_err(|e| e.to_string())?, &c01.inverse().unwrap())
        .map_err(|e| e.to_string())?;
    let mut compared = 0;
    for x in body.objects() {
        for f in w.samples() {
            ensure(w.value(x, f).unwrap() == back.value(x, f).unwrap(), || format!("round trip changes W at {f}"))?;
            compared += 1;
        }
    }
    Ok(format!("24 of 48 accepted on each of 16 pairs, equal to the determinant filter; round trip exact on {compared} (point, sample) values"))
}

fn criterion_9() -> Outcome {
    let args = ["classify", "crystalline:default", "--format", "json"];
    let first = run(&args);
    ensure(first.status.success(), || "classify failed".into())?;
    for i in 1..5 {
        ensure(run(&args).stdout == first.stdout, || format!("run {i} differs"))?;
    }
    let one = run(&["--threads", "1", "classify", "crystalline:default", "--format", "json"]);
    let eight = run(&["--threads", "8", "classify", "crystalline:default", "--format", "json"]);
    ensure(one.stdout == first.stdout && eight.stdout == first.stdout, || "thread count changes the output".into())?;
    Ok(format!("5 runs and --threads 1/8 give identical {} bytes", first.stdout.len()))
}

fn criterion_10() -> Outcome {
    let v = validator();
    for (fixture, stem) in GOLDEN_FIXTURES {
        let doc = stdout(&run(&["export", fixture]));
        check_golden(&format!("{stem}.document.json"), &doc)?;
        let parsed = compomat_cli::parse_document(stem, &doc).map_err(|e| e.to_string())?;
        ensure(compomat_cli::document::to_json(&parsed) == doc, || format!("{fixture} does not round-trip"))?;
        let path = golden_dir().join(format!("{stem}.document.json"));
        let report = stdout(&run(&["classify", path.to_str().unwrap(), "--format", "json"]));
        validate(&v, &report)?;
        check_golden(&format!("{stem}.classify.json"), &report)?;
    }
    for args in [["axioms", "pair:3"], ["core", "crystalline:default"], ["intersect", "triclinic:default"]] {
        let o = run(&[args[0], args[1], "--format", "json"]);
        validate(&v, &stdout(&o))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mismatched = dir.path().join("mismatched.json");
    std::fs::write(
        &mismatched,
        r#"{"schema_version": "1", "objects": ["X", "Y"], "groupoids": [
  {"name": "a", "mode": "matrix", "arrows": [{"src": "X", "dst": "Y", "payload": "[[1,0,0],[0,1,0],[0,0,1]]"}]},
  {"name": "b", "mode": "matrix", "objects": ["X"], "arrows": []}],
  "composite": {"omega1": {"groupoid": "a"}, "omega2": {"groupoid": "b"}, "require_transitive": false}}"#,
    )
    .map_err(|e| e.to_string())?;
    let not_closed = dir.path().join("not_closed.json");
    std::fs::write(
        &not_closed,
        r#"{"schema_version": "1", "objects": ["X"], "groupoids": [], "responses": [{"name": "W", "kind": "det"}],
  "composite": {"omega1": {"response": "W", "candidates": ["[[0,0,1],[1,0,0],[0,1,0]]"]}, "omega2": {"response": "W"}}}"#,
    )
    .map_err(|e| e.to_string())?;
    let cases: [(&[&str], i32); 5] = [
        (&["axioms", "pair:3"], 0),
        (&["classify", "triclinic:default"], 0),
        (&["classify", not_closed.to_str().unwrap()], 1),
        (&["classify", mismatched.to_str().unwrap()], 2),
        (&["classify", "--format", "yaml", "pair:2"], 2),
    ];
    for (args, code) in cases {
        let got = run(args).status.code();
        ensure(got == Some(code), || format!("{args:?} exited with {got:?}, expected {code}"))?;
    }
    Ok("3 golden fixtures reproduce byte-identically; reports validate against the schema; exit codes 0/1/2 exercised".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("groupoid axiom suite", criterion_1),
        ("commutativity conditions agree", criterion_2),
        ("commutative-square algebra", criterion_3),
        ("core groupoid oracle", criterion_4),
        ("relation cross-validation", criterion_5),
        ("crystalline example", criterion_6),
        ("triclinic investigation", criterion_7),
        ("material predicate", criterion_8),
        ("determinism", criterion_9),
        ("cli contract", criterion_10),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{name}] ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL [{name}] ({secs:.1}s): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
