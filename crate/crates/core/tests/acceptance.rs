//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. All comparisons are exact; there are no tolerances.

use majonorm::coherence::{
    additivity_check, check_coherent, pair_coherence_scan, verify_coherence_certificate,
    verify_incoherence_witness, CoherenceVerdict,
};
use majonorm::cone::{Cone, ConeKind, PositiveSet};
use majonorm::functionals::{op_norm, sup_over_m, Functional};
use majonorm::gallery::{make_f2_ball_instance, truncation_sequence};
use majonorm::lp::{brute_force_solve, solve, verify_solution};
use majonorm::majorize::{
    norm_p, norm_p_lex2, order_unit_norm, principal_ideal_identity_check, ChainReport,
    MajorizedSpace, NormValue,
};
use majonorm::ratlin::{solve_linear, LinearSolve, RVector, Rat};
use majonorm::sampling;
use rand::Rng;

fn report(criterion: usize, description: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("[PASS] criterion {criterion}: {description}"),
        Err(msg) => {
            println!("[FAIL] criterion {criterion}: {description} — {msg}");
            panic!("criterion {criterion} failed: {msg}");
        }
    }
}

fn l1(v: &RVector) -> Rat {
    let mut acc = Rat::zero();
    for x in v.iter() {
        acc += &x.abs();
    }
    acc
}

fn delta_space(n: usize) -> MajorizedSpace {
    let set = PositiveSet::new((0..n).map(|i| RVector::unit(n, i)).collect()).unwrap();
    MajorizedSpace::new(Cone::orthant(n), set).unwrap()
}

fn finite(v: NormValue) -> Result<Rat, String> {
    match v {
        NormValue::Finite(r) => Ok(r),
        NormValue::Infinite => Err("unexpected infinite norm value".into()),
    }
}

/// An interior order unit of a sampled proper cone: A⁻¹·1 for square
/// halfspace systems, the generator sum for generator cones.
fn order_unit_of(cone: &Cone) -> RVector {
    match cone.kind() {
        ConeKind::Halfspace(a) => {
            let ones = RVector::new(vec![Rat::one(); a.rows()]);
            match solve_linear(a, &ones).unwrap() {
                LinearSolve::Unique(u) => u,
                _ => unreachable!("sampled systems are square and invertible"),
            }
        }
        ConeKind::Generators(gens) => {
            let mut u = RVector::zeros(cone.dim());
            for g in gens {
                u = u.add(g).unwrap();
            }
            u
        }
        ConeKind::Lex2 => unreachable!("closed polyhedral cones only"),
    }
}

/// A random element of the dual cone K*.
fn dual_vector(rng: &mut rand_chacha::ChaCha8Rng, cone: &Cone) -> RVector {
    match cone.kind() {
        ConeKind::Halfspace(a) => {
            // φ = Aᵀλ with λ ≥ 0
            let lambda = RVector::new((0..a.rows()).map(|_| sampling::nonneg_rat(rng)).collect());
            a.transpose().matvec(&lambda).unwrap()
        }
        ConeKind::Generators(_) => loop {
            let phi = sampling::vector(rng, cone.dim());
            if cone.dual_contains(&phi).unwrap() {
                return phi;
            }
        },
        ConeKind::Lex2 => unreachable!("closed polyhedral cones only"),
    }
}

#[test]
fn criterion_01_delta_basis_identity() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(101);
        for n in 2..=10 {
            let space = delta_space(n);
            for _ in 0..100 {
                let v = sampling::vector(&mut rng, n);
                let got = finite(norm_p(&space, &v).map_err(|e| e.to_string())?.value)?;
                if got != l1(&v) {
                    return Err(format!("p_M({v:?}) = {got}, l1 = {}", l1(&v)));
                }
            }
        }
        Ok(())
    };
    report(1, "p_M on the delta basis equals the l1 norm", run());
}

#[test]
fn criterion_02_lex_counterexample() {
    let run = || -> Result<(), String> {
        let m = PositiveSet::new(vec![RVector::from_ints(&[1, 0])]).unwrap();
        let r = norm_p_lex2(&m, &RVector::from_ints(&[0, 1])).map_err(|e| e.to_string())?;
        if r.value != NormValue::Finite(Rat::zero()) || r.attained {
            return Err(format!("expected infimum 0 unattained, got {r:?}"));
        }
        let pair = MajorizedSpace::new(
            Cone::lex2(),
            PositiveSet::new(vec![
                RVector::from_ints(&[1, 1]),
                RVector::from_ints(&[0, 1]),
            ])
            .unwrap(),
        )
        .unwrap();
        match check_coherent(&pair).map_err(|e| e.to_string())? {
            CoherenceVerdict::Incoherent { witness } => {
                if !verify_incoherence_witness(&pair, &witness).map_err(|e| e.to_string())? {
                    return Err("returned witness fails verification".into());
                }
            }
            CoherenceVerdict::Coherent { .. } => {
                return Err("lex pair wrongly judged coherent".into())
            }
        }
        Ok(())
    };
    report(2, "lexicographic norm infimum is open and the lex pair is incoherent", run());
}

#[test]
fn criterion_03_f2_ball_incoherence() {
    let run = || -> Result<(), String> {
        for radius in [2, 3, 4] {
            let inst = make_f2_ball_instance(radius).map_err(|e| e.to_string())?;
            if check_coherent(&inst.space).map_err(|e| e.to_string())?.is_coherent() {
                return Err(format!("radius {radius}: wrongly judged coherent"));
            }
            let witness = RVector::from_ints(&[1, -1, -1]);
            if !verify_incoherence_witness(&inst.space, &witness).map_err(|e| e.to_string())? {
                return Err(format!("radius {radius}: witness (1,-1,-1) rejected"));
            }
        }
        Ok(())
    };
    report(3, "free-group ball instances are incoherent with the indicator witness", run());
}

#[test]
fn criterion_04_principal_ideal_chain() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(104);
        for i in 0..50 {
            let dim = rng.gen_range(2..=4);
            // every fifth instance is a singleton, collapsing the chain
            let size = if i % 5 == 0 { 1 } else { rng.gen_range(2..=4) };
            let space = sampling::instance(&mut rng, dim, size);
            let samples: Vec<RVector> =
                (0..4).map(|_| sampling::ideal_vector(&mut rng, &space)).collect();
            match principal_ideal_identity_check(&space, &samples).map_err(|e| e.to_string())? {
                ChainReport::Pass => {}
                other => return Err(format!("instance {i}: {other:?}")),
            }
        }
        Ok(())
    };
    report(4, "order-unit chain ‖v‖_u ≤ p_M(v) ≤ p_M(u)·‖v‖_u holds exactly", run());
}

#[test]
fn criterion_05_coherence_duality() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(105);
        for i in 0..100 {
            let dim = rng.gen_range(2..=4);
            let size = rng.gen_range(1..=4);
            let space = sampling::instance(&mut rng, dim, size);
            match check_coherent(&space).map_err(|e| e.to_string())? {
                CoherenceVerdict::Incoherent { witness } => {
                    if !verify_incoherence_witness(&space, &witness).map_err(|e| e.to_string())? {
                        return Err(format!("instance {i}: incoherence witness rejected"));
                    }
                }
                CoherenceVerdict::Coherent { phi, .. } => {
                    if !verify_coherence_certificate(&space, &phi).map_err(|e| e.to_string())? {
                        return Err(format!("instance {i}: coherence certificate rejected"));
                    }
                    for m in space.set().vectors() {
                        if phi.dot(m).unwrap() != Rat::one() {
                            return Err(format!("instance {i}: φ not constant 1 on M"));
                        }
                    }
                }
            }
        }
        Ok(())
    };
    report(5, "every instance yields exactly one verified certificate direction", run());
}

#[test]
fn criterion_06_additivity_equivalence() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(106);
        for i in 0..40 {
            let dim = rng.gen_range(2..=4);
            let size = rng.gen_range(1..=4);
            let space = sampling::instance(&mut rng, dim, size);
            let probes: Vec<RVector> = (0..30)
                .map(|_| {
                    RVector::new((0..size).map(|_| sampling::nonneg_rat(&mut rng)).collect())
                })
                .collect();
            let verdict = check_coherent(&space).map_err(|e| e.to_string())?;
            let rep = additivity_check(&space, &probes).map_err(|e| e.to_string())?;
            if !rep.passed() {
                return Err(format!("instance {i}: {rep:?}"));
            }
            // pass direction must agree with the verdict
            let additive = matches!(
                rep,
                majonorm::coherence::AdditivityReport::CoherentAdditive
            );
            if additive != verdict.is_coherent() {
                return Err(format!("instance {i}: additivity and verdict disagree"));
            }
        }
        Ok(())
    };
    report(6, "coherent ⟺ p_M additive on C_M over 30 probes per instance", run());
}

#[test]
fn criterion_07_operator_norm_squeeze() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(107);
        for i in 0..50 {
            let dim = rng.gen_range(2..=3);
            let size = rng.gen_range(1..=3);
            let space = sampling::instance(&mut rng, dim, size);
            let psi = Functional::new(dual_vector(&mut rng, space.cone()));
            let sup = sup_over_m(&psi, space.set()).map_err(|e| e.to_string())?;
            let op = op_norm(&space, &psi).map_err(|e| e.to_string())?;
            if op != sup {
                return Err(format!("instance {i}: positive ψ with op {op} ≠ sup {sup}"));
            }
            let arbitrary = Functional::new(sampling::vector(&mut rng, dim));
            let sup = sup_over_m(&arbitrary, space.set()).map_err(|e| e.to_string())?;
            let op = op_norm(&space, &arbitrary).map_err(|e| e.to_string())?;
            if sup > op {
                return Err(format!("instance {i}: sup {sup} > op norm {op}"));
            }
        }
        Ok(())
    };
    report(7, "op_norm = sup_M ψ for positive ψ and sup_M ψ ≤ op_norm always", run());
}

#[test]
fn criterion_08_norm_axioms_monotonicity_domination() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(108);
        for i in 0..20 {
            let dim = rng.gen_range(2..=4);
            let size = rng.gen_range(1..=4);
            let space = sampling::instance(&mut rng, dim, size);
            let u = order_unit_of(space.cone());
            let c_bound = space
                .set()
                .vectors()
                .iter()
                .map(|m| {
                    finite(
                        order_unit_norm(space.cone(), &u, m)
                            .map_err(|e| e.to_string())
                            .unwrap(),
                    )
                })
                .collect::<Result<Vec<Rat>, String>>()?
                .into_iter()
                .max()
                .unwrap();
            for _ in 0..10 {
                let v = sampling::ideal_vector(&mut rng, &space);
                let w = sampling::ideal_vector(&mut rng, &space);
                let pv = finite(norm_p(&space, &v).map_err(|e| e.to_string())?.value)?;
                let pw = finite(norm_p(&space, &w).map_err(|e| e.to_string())?.value)?;
                if pv.is_negative() {
                    return Err(format!("instance {i}: negative norm"));
                }
                if pv.is_zero() && !v.is_zero() {
                    return Err(format!("instance {i}: p_M = 0 on nonzero {v:?}"));
                }
                // absolute homogeneity over random rational scalars
                let q = sampling::rat(&mut rng);
                let pq = finite(
                    norm_p(&space, &v.scale(&q)).map_err(|e| e.to_string())?.value,
                )?;
                if pq != &q.abs() * &pv {
                    return Err(format!("instance {i}: homogeneity fails for q = {q}"));
                }
                // triangle inequality
                let pvw = finite(
                    norm_p(&space, &v.add(&w).unwrap()).map_err(|e| e.to_string())?.value,
                )?;
                if pvw > &pv + &pw {
                    return Err(format!("instance {i}: triangle inequality fails"));
                }
                // monotonicity on 0 ≤ x ≤ x + y with x, y ∈ C_M
                let t1 = RVector::new((0..size).map(|_| sampling::nonneg_rat(&mut rng)).collect());
                let t2 = RVector::new((0..size).map(|_| sampling::nonneg_rat(&mut rng)).collect());
                let x = space.set().combine(&t1).unwrap();
                let y = space.set().combine(&t2).unwrap();
                let px = finite(norm_p(&space, &x).map_err(|e| e.to_string())?.value)?;
                let pxy = finite(
                    norm_p(&space, &x.add(&y).unwrap()).map_err(|e| e.to_string())?.value,
                )?;
                if px > pxy {
                    return Err(format!("instance {i}: monotonicity fails"));
                }
                // domination ‖v‖_u ≤ C·p_M(v), C = max_m ‖m‖_u
                let vu = finite(order_unit_norm(space.cone(), &u, &v).map_err(|e| e.to_string())?)?;
                if vu > &c_bound * &pv {
                    return Err(format!("instance {i}: domination fails"));
                }
            }
        }
        Ok(())
    };
    report(8, "norm axioms, monotonicity, and the domination bound hold exactly", run());
}

#[test]
fn criterion_09_lp_trustworthiness() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(109);
        for i in 0..200 {
            let (vars, rows) = if i < 150 {
                (rng.gen_range(1..=3), rng.gen_range(0..=5))
            } else {
                (4, rng.gen_range(0..=4))
            };
            let lp = sampling::small_lp(&mut rng, vars, rows);
            let fast = solve(&lp).map_err(|e| e.to_string())?;
            let oracle = brute_force_solve(&lp).map_err(|e| e.to_string())?;
            if fast.status != oracle.status || fast.value != oracle.value {
                return Err(format!(
                    "lp {i}: solver {:?}/{:?} vs oracle {:?}/{:?}",
                    fast.status, fast.value, oracle.status, oracle.value
                ));
            }
            if !verify_solution(&lp, &fast) {
                return Err(format!("lp {i}: certificate rejected"));
            }
        }
        Ok(())
    };
    report(9, "simplex agrees with the brute-force oracle and certifies every answer", run());
}

#[test]
fn criterion_10_archimedean_pair_scan() {
    let run = || -> Result<(), String> {
        let mut rng = sampling::rng(110);
        let mut done = 0;
        while done < 100 {
            let dim = rng.gen_range(2..=4);
            let cone = sampling::proper_cone(&mut rng, dim);
            let pairs: Vec<(RVector, RVector)> = (0..5)
                .map(|_| sampling::normalized_positive_pair(&mut rng, &cone).unwrap())
                .collect();
            let scan = pair_coherence_scan(&cone, &pairs).map_err(|e| e.to_string())?;
            if let Some(idx) = scan.first_incoherent {
                return Err(format!("normalized pair {idx} incoherent under {cone:?}"));
            }
            done += pairs.len();
        }
        // the lex plane supplies the incoherent exception
        let scan = pair_coherence_scan(
            &Cone::lex2(),
            &[(RVector::from_ints(&[1, 1]), RVector::from_ints(&[0, 1]))],
        )
        .map_err(|e| e.to_string())?;
        if scan.first_incoherent != Some(0) {
            return Err("lex pair not flagged incoherent".into());
        }
        Ok(())
    };
    report(10, "base-normalized positive pairs are coherent; the lex pair is not", run());
}

#[test]
fn criterion_11_truncation_monotonicity() {
    let run = || -> Result<(), String> {
        // delta rule on a finitely supported vector: ∞ then stabilizes
        let rule = |k: usize| RVector::unit(5, k - 1);
        let mut v = RVector::zeros(5);
        v.set(0, Rat::int(2));
        v.set(2, Rat::int(-1));
        let seq = truncation_sequence(&rule, 5, &v).map_err(|e| e.to_string())?;
        let expected: Vec<NormValue> = vec![
            NormValue::Infinite,
            NormValue::Infinite,
            NormValue::Finite(Rat::int(3)),
            NormValue::Finite(Rat::int(3)),
            NormValue::Finite(Rat::int(3)),
        ];
        if seq != expected {
            return Err(format!("delta rule gave {seq:?}"));
        }
        for w in seq.windows(2) {
            if w[1] > w[0] {
                return Err("sequence increased".into());
            }
        }
        // shrinking-coordinate rule: cumulative truncations stay at 1
        let rule = |k: usize| RVector::new(vec![Rat::one(), Rat::new(1, k as i64).unwrap()]);
        let seq = truncation_sequence(&rule, 6, &RVector::unit(2, 1)).map_err(|e| e.to_string())?;
        if seq.iter().any(|x| *x != NormValue::Finite(Rat::one())) {
            return Err(format!("shrinking rule gave {seq:?}"));
        }
        Ok(())
    };
    report(11, "truncation sequences are nonincreasing and stabilize on the delta rule", run());
}
