//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion fails.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use cantor_spectra::catalog::{groups, tower_spec};
use cantor_spectra::dimgroup::{
    infinitesimal_report, pair, rational_member, torsion_quotient, InfinitesimalVerdict, RationalVerdict,
};
use cantor_spectra::exactnum::{parse_element, FieldElement, IntervalReal};
use cantor_spectra::measure::{dot_int, stationary_measure};
use cantor_spectra::spectra::{
    convergence_diagnostic, decompose, eigen_verdict, return_phase, suffix_criterion, torsion_audit, AuditParams,
    BatteryParams, SpectralContext, Trend,
};
use cantor_spectra::tower::{build_tower, DiagramSpec, OrderSpec, Tower, TowerPath};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let e = start.elapsed();
    ensure(e < limit, format!("took {:?}, limit {:?}", e, limit))
}

fn decimal(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn below(x: &IntervalReal, bound: &BigRational) -> bool {
    x.certainly_below(bound)
}

fn tower(name: &str, levels: usize) -> Tower {
    build_tower(&tower_spec(name).unwrap(), levels).unwrap()
}

fn c1_tower_identities() -> Outcome {
    let start = Instant::now();
    let t = tower("fibonacci", 40);
    let mu = stationary_measure(&t).map_err(|e| e.to_string())?;
    let field = mu.field().clone();
    ensure(dot_int(mu.mu(1), t.heights(1).unwrap()) == FieldElement::from_int(&field, 1), "mu_1 . H_1 != 1")?;
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    for _ in 0..50 {
        let n = rng.gen_range(2..=40);
        let m = rng.gen_range(1..n);
        let hn = t.heights(n).unwrap();
        ensure(
            t.matrix(n).unwrap().mul_vec(t.heights(n - 1).unwrap()) == hn,
            format!("H_{} != M_{} H_{}", n, n, n - 1),
        )?;
        let p = t.products(n, m).unwrap();
        ensure(p.mul_vec(t.heights(m).unwrap()) == hn, format!("P_{{{},{}}} H_{} != H_{}", n, m, m, n))?;
        for k in 0..p.cols() {
            let col = p.column(k);
            ensure(dot_int(mu.mu(n), &col) == mu.mu(m)[k], format!("mu_{} != mu_{} P_{{{},{}}}", m, n, n, m))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("50 seeded (n,m) pairs on 40 levels".into())
}

fn c2_golden_torsion() -> Outcome {
    let start = Instant::now();
    let (i, e) = groups("sec43", 1).map_err(|e| e.to_string())?;
    let q = torsion_quotient(&i, &e).map_err(|e| e.to_string())?;
    ensure(q.invariant_factors == vec![BigInt::one(), BigInt::from(2)], format!("factors {:?}", q.invariant_factors))?;
    ensure(q.free_rank == 0, "free part")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("I/E = {}", q.describe()))
}

fn c3_rational_torsion() -> Outcome {
    let start = Instant::now();
    for k in 2..=50usize {
        let (i, e) = groups("sec42", k).map_err(|e| e.to_string())?;
        let x = FieldElement::from_rational(i.field(), decimal(1, k as i64));
        ensure(i.contains(&x), format!("1/{} not in I", k))?;
        ensure(!e.contains(&x), format!("1/{} in E", k))?;
        for j in 2..k {
            ensure(!e.contains(&x.mul_int(&BigInt::from(j))), format!("{}/{} in E", j, k))?;
        }
        ensure(e.contains(&x.mul_int(&BigInt::from(k))), format!("{} * 1/{} not in E", k, k))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("1/k has order k in I/E for k = 2..50".into())
}

fn c4_odometer_rationals() -> Outcome {
    let t = tower("odometer2", 10);
    for j in 0..=20u32 {
        let q = BigInt::from(2).pow(j);
        let v = rational_member(&t, &BigInt::one(), &q, 64).map_err(|e| e.to_string())?;
        ensure(v == RationalVerdict::MemberAtLevel { level: j as usize + 1 }, format!("1/2^{}: {}", j, v))?;
    }
    let v = rational_member(&t, &BigInt::one(), &BigInt::from(3), 64).map_err(|e| e.to_string())?;
    ensure(matches!(v, RationalVerdict::CertifiedNonMember { .. }), format!("1/3: {}", v))?;
    Ok(format!("1/2^j members at level j+1 for j <= 20; 1/3 {}", v))
}

fn c5_fibonacci_battery() -> Outcome {
    let start = Instant::now();
    let t = tower("fibonacci", 31);
    let ctx = SpectralContext::new(&t);
    let p = BatteryParams { m: 2, n: 30, depth: 64 };
    let golden = parse_element("(-1+sqrt(5))/2").unwrap();
    let r = eigen_verdict(&ctx, &golden, &p).map_err(|e| e.to_string())?;
    ensure(r.verdict.to_string() == "PassesUpTo(30)", format!("golden: {}", r.verdict))?;
    let tiny = decimal(1, 1_000_000);
    let tail = r.summability.terms.last().ok_or("no summability terms")?;
    ensure(below(tail, &tiny), format!("summability tail {}", tail.tagged()))?;
    let d30 = r.suffix_deltas.terms.last().ok_or("no deltas")?;
    ensure(r.suffix_deltas.first_index + r.suffix_deltas.terms.len() - 1 == 30, "delta index")?;
    ensure(below(d30, &tiny), format!("delta_30 {}", d30.tagged()))?;
    let rho = r.summability.rho_hat.as_ref().ok_or("no rho_hat")?;
    ensure(
        rho.lo().to_rational() >= decimal(33, 100) && rho.hi().to_rational() <= decimal(43, 100),
        format!("rho_hat {}", rho.tagged()),
    )?;
    let quarter = parse_element("(-1+sqrt(5))/4").unwrap();
    let v = eigen_verdict(&ctx, &quarter, &p).map_err(|e| e.to_string())?.verdict;
    ensure(v.to_string() == "RefutedNecessary(orthogonality)", format!("(sqrt5-1)/4: {}", v))?;
    let half = parse_element("1/2").unwrap();
    let v = eigen_verdict(&ctx, &half, &p).map_err(|e| e.to_string())?.verdict;
    ensure(v.to_string() == "RefutedNecessary(rational-certified-non-member)", format!("1/2: {}", v))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("golden passes, rho_hat {}", rho.tagged()))
}

fn c6_infinitesimals() -> Outcome {
    let start = Instant::now();
    let fib = infinitesimal_report(&tower("fibonacci", 20)).map_err(|e| e.to_string())?;
    ensure(fib.verdict == InfinitesimalVerdict::Trivial, "fibonacci not trivial")?;
    let t = tower("inf-demo", 20);
    let rep = infinitesimal_report(&t).map_err(|e| e.to_string())?;
    let InfinitesimalVerdict::NonTrivial { witness, .. } = &rep.verdict else {
        return Err("inf-demo trivial".into());
    };
    ensure(*witness == vec![BigInt::one(), -BigInt::one()], format!("witness {:?}", witness))?;
    let mu = stationary_measure(&t).map_err(|e| e.to_string())?;
    ensure(pair(mu.mu(1), witness).is_zero(), "<mu_1, v> != 0")?;
    for j in 2..=20 {
        let img = t.products(j, 1).unwrap().mul_vec(witness);
        ensure(img.iter().any(|x| !x.is_zero()), format!("P_{{{},1}} v = 0", j))?;
    }
    ensure(rep.checked_levels >= 20, "checked levels")?;
    within(start, Duration::from_secs(2))?;
    Ok("fibonacci trivial; inf-demo witness (1,-1)".into())
}

fn c7_torsion_audit() -> Outcome {
    let start = Instant::now();
    let t = tower("fibonacci", 26);
    let ctx = SpectralContext::new(&t);
    let r =
        torsion_audit(&ctx, &AuditParams { m: 1, wbox: 4, kmax: 5, n: 25, depth: 64 }).map_err(|e| e.to_string())?;
    ensure(r.flags.is_empty(), format!("{} flags", r.flags.len()))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} candidates, {} plausible, 0 flags", r.candidate_count, r.plausible_count))
}

/// Three levels, 2 + 5 + 5 = 12 edges, with non-default orders.
fn small_tower() -> Tower {
    let spec = DiagramSpec::Explicit {
        matrices: vec![vec![vec![1], vec![1]], vec![vec![2, 1], vec![1, 1]], vec![vec![1, 2], vec![1, 1]]],
        orders: Some(vec![
            OrderSpec { level: Some(2), vertex: 1, sources: vec![1, 2, 1] },
            OrderSpec { level: Some(2), vertex: 2, sources: vec![2, 1] },
            OrderSpec { level: Some(3), vertex: 1, sources: vec![2, 1, 2] },
            OrderSpec { level: Some(3), vertex: 2, sources: vec![1, 2] },
        ]),
    };
    build_tower(&spec, 3).unwrap()
}

/// Lay a level-3 tower out as a row of unit-height level-1 towers and read entrance times
/// and crossed-tower counts off positions.
struct Layout {
    /// Level-1 vertex at each position.
    cells: Vec<usize>,
    /// (position, vertex) of each level-2 sub-tower start.
    starts: Vec<(usize, usize)>,
}

fn layout(t: &Tower, top: usize) -> Layout {
    let mut cells = Vec::new();
    let mut starts = Vec::new();
    for &u in &t.order(3).unwrap()[top] {
        starts.push((cells.len(), u));
        cells.extend(t.order(2).unwrap()[u].iter().copied());
    }
    Layout { cells, starts }
}

fn c8_suffix_bruteforce() -> Outcome {
    let start = Instant::now();
    let t = small_tower();
    ensure(t.order(2).unwrap()[0] == vec![0, 1, 0], "orders not applied")?;
    let mut checked = 0;
    for s in ["(-1+sqrt(5))/2", "1/3", "2/7", "sqrt(2)", "5"] {
        let alpha = parse_element(s).unwrap();
        let f = alpha.field().clone();
        let exact = suffix_criterion(&t, &alpha, 2).map_err(|e| e.to_string())?.exact_terms;
        let w: Vec<Vec<BigInt>> = (1..=2).map(|n| decompose(&t, &alpha, n).unwrap().w).collect();
        let mut brute = [FieldElement::zero(&f), FieldElement::zero(&f)];
        for path in t.paths(3).unwrap() {
            let lay = layout(&t, path.top);
            let len = lay.cells.len();
            let u = t.order(3).unwrap()[path.top][path.edges[0]];
            let pos = lay.starts[path.edges[0]].0 + path.edges[1];
            // simulated entrance times r_1 = 0, r_2, r_3
            let next2 = lay.starts.iter().map(|&(p, _)| p).find(|&p| p >= pos).unwrap_or(len);
            let r = [0, next2 - pos, if pos == 0 { 0 } else { len - pos }];
            // crossed towers between consecutive entrances
            let mut s1 = vec![0i64; 2];
            for &k in &lay.cells[pos..next2] {
                s1[k] += 1;
            }
            let end3 = if pos == 0 { 0 } else { len };
            let mut s2 = vec![0i64; 2];
            for &(p, v) in &lay.starts {
                if p >= next2 && p < end3 {
                    s2[v] += 1;
                }
            }
            let ph3 = return_phase(&t, &path, &alpha).map_err(|e| e.to_string())?;
            let ph2 = return_phase(&t, &TowerPath { top: u, edges: path.edges[1..].to_vec() }, &alpha)
                .map_err(|e| e.to_string())?;
            ensure(ph3.entrance_time == BigInt::from(r[2]), format!("r_3 mismatch on {:?}", path))?;
            ensure(ph2.entrance_time == BigInt::from(r[1]), format!("r_2 mismatch on {:?}", path))?;
            let phases = [FieldElement::zero(&f), ph2.phase, ph3.phase];
            for (n, s) in [s1, s2].iter().enumerate() {
                let sb: Vec<BigInt> = s.iter().map(|&x| BigInt::from(x)).collect();
                let ws: BigInt = sb.iter().zip(&w[n]).map(|(a, b)| a * b).sum();
                let dr = BigInt::from(r[n + 1] as i64 - r[n] as i64);
                let val = &alpha.mul_int(&dr) - &FieldElement::from_int(&f, ws);
                ensure((&(&phases[n + 1] - &phases[n]) - &val).is_integer(), "phase difference")?;
                let a = val.abs();
                if a.cmp_elem(&brute[n]).is_gt() {
                    brute[n] = a;
                }
            }
            checked += 1;
        }
        for n in 0..2 {
            ensure(
                brute[n] == exact[n],
                format!("alpha {}: delta_{} {} vs {}", s, n + 1, brute[n].exact_string(), exact[n].exact_string()),
            )?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("delta_1, delta_2 agree exactly over {} path evaluations", checked))
}

fn c9_convergence() -> Outcome {
    let t = tower("fibonacci", 40);
    let ctx = SpectralContext::new(&t);
    let r = convergence_diagnostic(&ctx, 1, 40).map_err(|e| e.to_string())?;
    let tail = r.series.terms.last().ok_or("no terms")?;
    ensure(below(tail, &decimal(1, 100_000_000)), format!("tail {}", tail.tagged()))?;
    ensure(r.series.trend == Trend::Decaying, format!("trend {:?}", r.series.trend))?;
    let total = r.series.partial_sums.last().unwrap();
    Ok(format!("tail {}, sum {}", tail.tagged(), total.tagged()))
}

fn c10_determinism() -> Outcome {
    let run = |threads: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_cantor-spectra"))
            .args(["audit", "--catalog", "fibonacci"])
            .env("CANTOR_SPECTRA_THREADS", threads)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), String::from_utf8_lossy(&out.stderr).to_string())?;
        Ok(out.stdout)
    };
    let a = run("1")?;
    let b = run("4")?;
    let c = run("4")?;
    ensure(a == b && b == c, "reports differ")?;
    Ok(format!("{} identical bytes across 1 and 4 threads", a.len()))
}

/// Written straight to stdout so the lines show up without `--nocapture`.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", line);
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("exact tower identities", c1_tower_identities),
        ("golden-mean torsion Z/2Z", c2_golden_torsion),
        ("rational torsion witnesses", c3_rational_torsion),
        ("odometer rational subgroup", c4_odometer_rationals),
        ("fibonacci eigenvalue battery", c5_fibonacci_battery),
        ("infinitesimal verdicts", c6_infinitesimals),
        ("torsion audit", c7_torsion_audit),
        ("suffix brute force", c8_suffix_bruteforce),
        ("convergence diagnostic", c9_convergence),
        ("thread determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match res {
            Ok(msg) => report(&format!("criterion {:>2} PASS {} ({} ms): {}", i + 1, name, ms, msg)),
            Err(msg) => {
                failed += 1;
                report(&format!("criterion {:>2} FAIL {} ({} ms): {}", i + 1, name, ms, msg));
            }
        }
    }
    assert_eq!(failed, 0, "{} acceptance criteria failed", failed);
}
