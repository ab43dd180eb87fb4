//! End-to-end acceptance suite. Each criterion is one test that prints a
//! single PASS/FAIL line (visible with `--nocapture`) and asserts success.

mod common;

use blackwell::channel::{
    binary_split, optimal_reward, reweight_reward, Channel, DecisionProblem, Prior,
};
use blackwell::data;
use blackwell::exact_linear::{
    certificate_refutes, lp_solve, rint, LpOutcome, LpProblem, Mat, Rat,
};
use blackwell::orders::{
    blackwell_compare, equivalent, falsify_by_decision_problem, falsify_with_candidates,
    garbling_order, k_decision_order, zonotope_order, GarblingOutcome, Verdict,
};
use blackwell::polytope::{self, binary_join, binary_meet};
use blackwell::sample::{random_channel, random_prior, random_reward};
use blackwell::verify::bruteforce_optimal_reward;
use blackwell::zonotope::{minimal_generators, Membership, Zonotope};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::Instant;

fn criterion(n: usize, name: &str, f: impl FnOnce() -> Result<String, String>) {
    match f() {
        Ok(detail) => println!("[PASS] criterion {n}: {name} — {detail}"),
        Err(e) => {
            println!("[FAIL] criterion {n}: {name} — {e}");
            panic!("criterion {n} failed: {e}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

#[test]
fn criterion_1_garbling_failure_and_unique_factor() {
    criterion(
        1,
        "garbling LP infeasible; unique nonnegative factor reproduced, non-stochastic",
        || {
            let start = Instant::now();
            let kappa = data::separating_kappa();
            let mu = data::separating_mu();
            match garbling_order(&kappa, &mu).map_err(err)? {
                GarblingOutcome::Refuted { .. } => {}
                GarblingOutcome::Garbles(_) => ensure!(false, "unexpected garbling witness"),
            }
            // Unique nonnegative solution of mu_col = kappa a, one column at
            // a time: min and max of each coordinate must agree.
            let expected = data::separating_lambda();
            let (nx, ny, nz) = (3, 4, 3);
            let mut a = Mat::zeros(nx, ny);
            for x in 0..nx {
                for y in 0..ny {
                    a[(x, y)] = kappa.entry(x, y).clone();
                }
            }
            for z in 0..nz {
                let b: Vec<Rat> = (0..nx).map(|x| mu.entry(x, z).clone()).collect();
                for y in 0..ny {
                    let solve = |sign: i64| -> Result<Rat, String> {
                        let mut p = LpProblem::nonneg(a.clone(), b.clone());
                        let mut c = vec![Rat::zero(); ny];
                        c[y] = rint(sign);
                        p.objective = Some(c);
                        match lp_solve(&p).map_err(err)? {
                            LpOutcome::Feasible { objective, .. } => {
                                Ok(objective.expect("objective requested") * rint(sign))
                            }
                            LpOutcome::Infeasible { .. } => {
                                Err("factor system unexpectedly infeasible".into())
                            }
                        }
                    };
                    let hi = solve(1)?;
                    let lo = solve(-1)?;
                    ensure!(lo == hi, "coordinate ({y},{z}) not unique: {lo} vs {hi}");
                    ensure!(
                        lo == expected[(y, z)],
                        "coordinate ({y},{z}) is {lo}, expected {}",
                        expected[(y, z)]
                    );
                }
            }
            let last_row: Rat = (0..nz).map(|z| expected[(ny - 1, z)].clone()).sum();
            ensure!(last_row.is_zero(), "last factor row sums to {last_row}");
            let elapsed = start.elapsed();
            ensure!(elapsed.as_secs() < 1, "took {elapsed:?}, budget 1 s");
            Ok(format!("unique factor confirmed in {elapsed:?}"))
        },
    );
}

#[test]
fn criterion_2_zonotope_inclusion() {
    criterion(
        2,
        "zonotope inclusion holds forward with witnesses, fails backward with certificate",
        || {
            let start = Instant::now();
            let kappa = data::separating_kappa();
            let mu = data::separating_mu();
            let zk = Zonotope::of_channel(&kappa);
            let zm = Zonotope::of_channel(&mu);
            let mu_vertices = zm.try_vertices().map_err(err)?;
            ensure!(
                mu_vertices.len() == 8,
                "expected 8 vertices of the inner zonotope, got {}",
                mu_vertices.len()
            );
            for v in mu_vertices {
                match zk.membership(v).map_err(err)? {
                    Membership::Inside(coeffs) => {
                        let image = kappa.matrix().mul_vec(&coeffs).map_err(err)?;
                        ensure!(&image == v, "witness for {v:?} does not recompose");
                    }
                    Membership::Outside(_) => ensure!(false, "vertex {v:?} not inside"),
                }
            }
            ensure!(zk.includes(&zm).map_err(err)?, "forward inclusion failed");
            // Backward: some vertex of Z_kappa lies outside Z_mu, with a
            // Farkas certificate verified against the membership LP.
            let mut refuted = false;
            for v in zk.try_vertices().map_err(err)? {
                if let Membership::Outside(cert) = zm.membership(v).map_err(err)? {
                    let lp = LpProblem::unit_box(mu.matrix().clone(), v.clone());
                    ensure!(
                        certificate_refutes(&lp, &cert),
                        "certificate for {v:?} does not verify"
                    );
                    refuted = true;
                }
            }
            ensure!(refuted, "no outside vertex found; backward inclusion holds");
            ensure!(!zm.includes(&zk).map_err(err)?, "backward inclusion holds");
            let elapsed = start.elapsed();
            ensure!(elapsed.as_secs() < 1, "took {elapsed:?}, budget 1 s");
            Ok(format!("8 witnesses + verified certificate in {elapsed:?}"))
        },
    );
}

#[test]
fn criterion_3_reward_separation() {
    criterion(
        3,
        "reward separation under the uniform prior, brute-force oracle agrees",
        || {
            let kappa = data::separating_kappa();
            let mu = data::separating_mu();
            let dp = DecisionProblem::new(Prior::uniform(3), data::separating_reward())
                .map_err(err)?;
            let (rk, _) = optimal_reward(&kappa, &dp).map_err(err)?;
            let (rm, _) = optimal_reward(&mu, &dp).map_err(err)?;
            ensure!(rm == rint(1), "R(mu) = {rm}, expected 1");
            ensure!(rk < rint(1), "R(kappa) = {rk} not below 1");
            ensure!(
                rk == bruteforce_optimal_reward(&kappa, &dp),
                "oracle disagrees on kappa"
            );
            ensure!(
                rm == bruteforce_optimal_reward(&mu, &dp),
                "oracle disagrees on mu"
            );
            Ok(format!(
                "R(mu) = {rm}, R(kappa) = {rk} (published as {})",
                data::separating_kappa_reward_published()
            ))
        },
    );
}

#[test]
fn criterion_4_k_decision_separation() {
    criterion(
        4,
        "2-decision dominance holds, 3-decision fails, falsifier confirms",
        || {
            let kappa = data::separating_kappa();
            let mu = data::separating_mu();
            ensure!(
                k_decision_order(&kappa, &mu, 2).map_err(err)?,
                "2-decision order should hold"
            );
            ensure!(
                !k_decision_order(&kappa, &mu, 3).map_err(err)?,
                "3-decision order should fail"
            );
            let candidate = DecisionProblem::new(Prior::uniform(3), data::separating_reward())
                .map_err(err)?;
            let found = falsify_with_candidates(&kappa, &mu, 3, 0, 0, &[candidate])
                .map_err(err)?;
            ensure!(found.is_some(), "seeded falsifier found nothing");
            Ok("k = 2 true, k = 3 false with a concrete decision problem".into())
        },
    );
}

#[test]
fn criterion_5_intersection_is_not_a_zonotope() {
    criterion(
        5,
        "zonotope intersection has the eight published vertices and a triangular face",
        || {
            let start = Instant::now();
            let z1 = Zonotope::of_channel(&data::lattice_kappa1());
            let z2 = Zonotope::of_channel(&data::lattice_kappa2());
            let p1 = polytope::convex_hull(z1.try_vertices().map_err(err)?, 3).map_err(err)?;
            let p2 = polytope::convex_hull(z2.try_vertices().map_err(err)?, 3).map_err(err)?;
            let meet = polytope::intersect(&p1, &p2).map_err(err)?;
            let got: BTreeSet<Vec<Rat>> = meet.vertices().iter().cloned().collect();
            let want: BTreeSet<Vec<Rat>> =
                data::lattice_intersection_vertices().into_iter().collect();
            ensure!(got == want, "vertex sets differ: got {got:?}");
            let (is_zono, face) = polytope::is_zonotope(&meet).map_err(err)?;
            ensure!(!is_zono, "intersection recognized as a zonotope");
            let face = face.ok_or("no offending face reported")?;
            ensure!(
                face.vertices.len() == 3,
                "offending face has {} vertices, expected a triangle",
                face.vertices.len()
            );
            let elapsed = start.elapsed();
            ensure!(elapsed.as_secs() < 5, "took {elapsed:?}, budget 5 s");
            Ok(format!("8 exact vertices, triangular face, {elapsed:?}"))
        },
    );
}

const SUITE_INSTANCES: usize = 500;

fn random_dims<R: Rng>(rng: &mut R) -> (usize, usize) {
    (rng.gen_range(2..=3), rng.gen_range(2..=5))
}

#[test]
fn criterion_6_lemma_suites() {
    criterion(6, "randomized lemma suites, 500 instances each", || {
        // Zonotope basics: inside the unit cube, corners present, symmetric.
        let mut rng = ChaCha8Rng::seed_from_u64(601);
        for i in 0..SUITE_INSTANCES {
            let (d, m) = random_dims(&mut rng);
            let kappa = random_channel(&mut rng, d, m);
            let z = Zonotope::of_channel(&kappa);
            let verts: BTreeSet<Vec<Rat>> =
                z.try_vertices().map_err(err)?.iter().cloned().collect();
            for v in &verts {
                ensure!(
                    v.iter().all(|c| !c.is_negative() && *c <= Rat::one()),
                    "instance {i}: vertex {v:?} outside the unit cube"
                );
                let mirror: Vec<Rat> = v.iter().map(|c| Rat::one() - c).collect();
                ensure!(
                    verts.contains(&mirror),
                    "instance {i}: vertex set not symmetric about the center"
                );
            }
            let zero = vec![Rat::zero(); d];
            let one = vec![Rat::one(); d];
            ensure!(
                z.contains_point(&zero).map_err(err)?.is_some()
                    && z.contains_point(&one).map_err(err)?.is_some(),
                "instance {i}: corners 0 / 1 not contained"
            );
        }

        // Composing with any stochastic factor shrinks the zonotope.
        let mut rng = ChaCha8Rng::seed_from_u64(603);
        for i in 0..SUITE_INSTANCES {
            let (d, m) = random_dims(&mut rng);
            let nz = rng.gen_range(2..=5);
            let kappa = random_channel(&mut rng, d, m);
            let lambda = random_channel(&mut rng, m, nz);
            let mu = kappa.compose(&lambda).map_err(err)?;
            ensure!(
                zonotope_order(&kappa, &mu).map_err(err)?,
                "instance {i}: garbling without zonotope inclusion"
            );
        }

        // Minimal generators: equal zonotope, mutual garbling witnesses.
        let mut rng = ChaCha8Rng::seed_from_u64(604);
        for i in 0..SUITE_INSTANCES {
            let d = rng.gen_range(2..=3);
            let r = rng.gen_range(2..=4);
            let base = random_channel(&mut rng, d, r);
            // split columns into scaled copies so proportional pairs occur
            let mut cols: Vec<Vec<Rat>> = Vec::new();
            for j in 0..r {
                let c = base.column(j);
                if rng.gen_bool(0.5) {
                    let den: i64 = rng.gen_range(1..=4);
                    let t = Rat::new(rng.gen_range(0..=den).into(), den.into());
                    let s = Rat::one() - &t;
                    cols.push(c.iter().map(|v| v * &t).collect());
                    cols.push(c.iter().map(|v| v * &s).collect());
                } else {
                    cols.push(c);
                }
            }
            if rng.gen_bool(0.3) {
                cols.push(vec![Rat::zero(); d]);
            }
            let mut m = Mat::zeros(d, cols.len());
            for (j, c) in cols.iter().enumerate() {
                for x in 0..d {
                    m[(x, j)] = c[x].clone();
                }
            }
            let kappa = Channel::new(m).map_err(err)?;
            let (nu, l1, l2) = minimal_generators(&kappa);
            ensure!(
                kappa.compose(&l1).map_err(err)? == nu,
                "instance {i}: first witness does not recompose"
            );
            ensure!(
                nu.compose(&l2).map_err(err)? == kappa,
                "instance {i}: second witness does not recompose"
            );
            ensure!(
                equivalent(&kappa, &nu).map_err(err)?,
                "instance {i}: zonotope changed by generator reduction"
            );
        }

        // Binary split: the witness recomposes exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(605);
        for i in 0..SUITE_INSTANCES {
            let (d, m) = random_dims(&mut rng);
            let kappa = random_channel(&mut rng, d, m);
            let coeffs: Vec<Rat> = (0..m)
                .map(|_| {
                    let den: i64 = rng.gen_range(1..=4);
                    Rat::new(rng.gen_range(0..=den).into(), den.into())
                })
                .collect();
            let (mv, w) = binary_split(&kappa, &coeffs).map_err(err)?;
            ensure!(
                kappa.compose(&w).map_err(err)? == mv,
                "instance {i}: split witness does not recompose"
            );
            ensure!(
                garbling_order(&kappa, &mv).map_err(err)?.holds(),
                "instance {i}: split channel is not a garbling"
            );
        }

        // Relations among the decision orders.
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        for i in 0..SUITE_INSTANCES {
            let d = rng.gen_range(2..=3);
            let ny = rng.gen_range(2..=4);
            let nz = rng.gen_range(2..=4);
            let kappa = random_channel(&mut rng, d, ny);
            let mu = if rng.gen_bool(0.4) {
                // garblings keep the "true" branches exercised
                let lambda = random_channel(&mut rng, ny, nz);
                kappa.compose(&lambda).map_err(err)?
            } else {
                random_channel(&mut rng, d, nz)
            };
            let g = garbling_order(&kappa, &mu).map_err(err)?.holds();
            let zo = zonotope_order(&kappa, &mu).map_err(err)?;
            let k2 = k_decision_order(&kappa, &mu, 2).map_err(err)?;
            let k3 = k_decision_order(&kappa, &mu, 3).map_err(err)?;
            let kbig = k_decision_order(&kappa, &mu, nz.max(2)).map_err(err)?;
            ensure!(k2 == zo, "instance {i}: k=2 and zonotope order disagree");
            ensure!(!k3 || k2, "instance {i}: k=3 holds but k=2 fails");
            ensure!(!g || (k2 && k3), "instance {i}: garbling without k-dominance");
            ensure!(kbig == g, "instance {i}: k >= |Z| differs from garbling");
        }

        // Binary inputs: zonotope order equals garbling order.
        let mut rng = ChaCha8Rng::seed_from_u64(607);
        for i in 0..SUITE_INSTANCES {
            let ny = rng.gen_range(2..=5);
            let nz = rng.gen_range(2..=5);
            let kappa = random_channel(&mut rng, 2, ny);
            let mu = random_channel(&mut rng, 2, nz);
            let g = garbling_order(&kappa, &mu).map_err(err)?.holds();
            let zo = zonotope_order(&kappa, &mu).map_err(err)?;
            ensure!(g == zo, "instance {i}: binary orders disagree");
        }

        // Reward reweighting identity: R(kappa, q, u) = R(kappa, p, u').
        let mut rng = ChaCha8Rng::seed_from_u64(608);
        for i in 0..SUITE_INSTANCES {
            let (d, m) = random_dims(&mut rng);
            let na = rng.gen_range(2..=4);
            let kappa = random_channel(&mut rng, d, m);
            let p = random_prior(&mut rng, d);
            let q = random_prior(&mut rng, d);
            let u = random_reward(&mut rng, d, na);
            let u2 = reweight_reward(&p, &q, &u).map_err(err)?;
            let dq = DecisionProblem::new(q.clone(), u).map_err(err)?;
            let dp = DecisionProblem::new(p.clone(), u2).map_err(err)?;
            let (rq, _) = optimal_reward(&kappa, &dq).map_err(err)?;
            let (rp, _) = optimal_reward(&kappa, &dp).map_err(err)?;
            ensure!(rq == rp, "instance {i}: reweighting identity broken");
        }

        Ok(format!("7 suites x {SUITE_INSTANCES} instances, zero failures"))
    });
}

#[test]
fn criterion_7_binary_lattice() {
    criterion(7, "binary meet/join bounds and lattice laws, 200 pairs", || {
        let mut rng = ChaCha8Rng::seed_from_u64(700);
        let pairs = 200;
        for i in 0..pairs {
            let ny = rng.gen_range(2..=4);
            let nz = rng.gen_range(2..=4);
            let kappa = random_channel(&mut rng, 2, ny);
            let mu = random_channel(&mut rng, 2, nz);
            let meet = binary_meet(&kappa, &mu).map_err(err)?;
            let join = binary_join(&kappa, &mu).map_err(err)?;
            ensure!(
                garbling_order(&kappa, &meet).map_err(err)?.holds()
                    && garbling_order(&mu, &meet).map_err(err)?.holds(),
                "pair {i}: meet is not a common garbling"
            );
            ensure!(
                garbling_order(&join, &kappa).map_err(err)?.holds()
                    && garbling_order(&join, &mu).map_err(err)?.holds(),
                "pair {i}: join is not a common upper bound"
            );
            // a sampled common lower bound sits below the meet, a sampled
            // common upper bound above the join
            let lower = meet
                .compose(&random_channel(&mut rng, meet.output_size(), 2))
                .map_err(err)?;
            ensure!(
                garbling_order(&meet, &lower).map_err(err)?.holds(),
                "pair {i}: meet does not dominate a garbling of itself"
            );
            let probe = random_channel(&mut rng, 2, 3);
            if garbling_order(&probe, &kappa).map_err(err)?.holds()
                && garbling_order(&probe, &mu).map_err(err)?.holds()
            {
                ensure!(
                    garbling_order(&probe, &join).map_err(err)?.holds(),
                    "pair {i}: common upper bound below the join"
                );
            }
            // lattice laws up to channel equivalence
            ensure!(
                equivalent(&meet, &binary_meet(&mu, &kappa).map_err(err)?).map_err(err)?,
                "pair {i}: meet not commutative"
            );
            ensure!(
                equivalent(&join, &binary_join(&mu, &kappa).map_err(err)?).map_err(err)?,
                "pair {i}: join not commutative"
            );
            ensure!(
                equivalent(&kappa, &binary_meet(&kappa, &kappa).map_err(err)?).map_err(err)?,
                "pair {i}: meet not idempotent"
            );
            ensure!(
                equivalent(&kappa, &binary_join(&kappa, &kappa).map_err(err)?).map_err(err)?,
                "pair {i}: join not idempotent"
            );
            ensure!(
                equivalent(&kappa, &binary_meet(&kappa, &join).map_err(err)?).map_err(err)?,
                "pair {i}: absorption meet(a, join(a,b)) failed"
            );
            ensure!(
                equivalent(&kappa, &binary_join(&kappa, &meet).map_err(err)?).map_err(err)?,
                "pair {i}: absorption join(a, meet(a,b)) failed"
            );
        }
        Ok(format!("{pairs} pairs, zero failures"))
    });
}

#[test]
fn criterion_8_oracle_equivalence() {
    criterion(8, "independent oracles agree with the engine", || {
        // Vertex enumeration vs the facet-normal oracle. Generator counts up
        // to 8; the 2^m corner enumeration makes large m expensive, so most
        // instances stay small with a dedicated batch at m = 7, 8.
        let mut rng = ChaCha8Rng::seed_from_u64(800);
        let mut batches = vec![(200, 6), (16, 8)];
        let mut total = 0;
        while let Some((want, m_max)) = batches.pop() {
            let mut checked = 0;
            while checked < want {
                let d: usize = rng.gen_range(2..=3);
                let m = rng.gen_range(if m_max > 6 { 7 } else { d }..=m_max);
                let kappa = random_channel(&mut rng, d, m);
                if !common::full_rank_generators(&kappa) {
                    continue;
                }
                let engine: BTreeSet<Vec<Rat>> = Zonotope::of_channel(&kappa)
                    .try_vertices()
                    .map_err(err)?
                    .iter()
                    .cloned()
                    .collect();
                let oracle: BTreeSet<Vec<Rat>> =
                    common::oracle_vertices(&kappa).into_iter().collect();
                ensure!(
                    engine == oracle,
                    "vertex oracle disagrees on a {d}x{m} channel"
                );
                checked += 1;
                total += 1;
            }
        }
        assert_eq!(total, 216);

        // Whenever the polytope test says the k-decision order holds, the
        // falsifier must come up empty even with a large budget.
        let mut rng = ChaCha8Rng::seed_from_u64(801);
        let trials = 10_000;
        for i in 0..3 {
            let d = rng.gen_range(2..=3);
            let ny = rng.gen_range(2..=4);
            let nz = rng.gen_range(2..=4);
            let kappa = random_channel(&mut rng, d, ny);
            let lambda = random_channel(&mut rng, ny, nz);
            let mu = kappa.compose(&lambda).map_err(err)?;
            for k in 2..=3 {
                ensure!(
                    k_decision_order(&kappa, &mu, k).map_err(err)?,
                    "instance {i}: constructed garbling not k-dominated"
                );
                ensure!(
                    falsify_by_decision_problem(&kappa, &mu, k, trials, 9000 + i)
                        .map_err(err)?
                        .is_none(),
                    "instance {i}: falsifier beat a true k = {k} dominance"
                );
            }
        }

        // On the separating pair the falsifier seeded with the embedded
        // reward finds the k = 3 counterexample within budget.
        let kappa = data::separating_kappa();
        let mu = data::separating_mu();
        let candidate =
            DecisionProblem::new(Prior::uniform(3), data::separating_reward()).map_err(err)?;
        ensure!(
            falsify_with_candidates(&kappa, &mu, 3, trials, 77, &[candidate])
                .map_err(err)?
                .is_some(),
            "seeded falsifier missed the known counterexample"
        );
        ensure!(
            blackwell_compare(&kappa, &mu).map_err(err)?.verdict == Verdict::Incomparable,
            "separating pair not incomparable"
        );
        Ok("vertex oracle on 216 instances; falsifier consistent at 10^4 trials".into())
    });
}
