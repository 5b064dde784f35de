use calc_cli::oracle::cad_decide;
use calc_cli::random::{qe_instance, sentence, Shape};
use calc_cli::verify::verify_qe;
use calc_core::engine::{check_truth, eliminate_quantifiers, EngineConfig, SolverResult};
use calc_core::formula::{to_prenex, Formula};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn decide(f: &Formula) -> Option<bool> {
    match check_truth(f, &EngineConfig::default()).0 {
        SolverResult::Sat => Some(true),
        SolverResult::Unsat => Some(false),
        SolverResult::Unknown(_) => None,
    }
}

#[test]
fn negation_flips_the_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for _ in 0..100 {
        let f = sentence(&mut rng, 3, &Shape::default());
        let neg = to_prenex(&Formula::not(f.clone())).to_formula();
        if let (Some(a), Some(b)) = (decide(&f), decide(&neg)) {
            assert_ne!(a, b, "{f}");
            compared += 1;
        }
    }
    assert!(compared >= 90, "{compared}");
}

#[test]
fn qe_results_agree_with_instantiation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = EngineConfig::default();
    let mut verified = 0;
    for k in 0..40 {
        let f = qe_instance(&mut rng, 2, &Shape::default());
        let Ok(out) = eliminate_quantifiers(&f, &cfg).0 else {
            continue;
        };
        let report = verify_qe(&f, &out.formula, 50, k, &cfg);
        assert!(report.passed(), "{f} -> {}: {report}", out.formula);
        verified += 1;
    }
    assert!(verified >= 36, "{verified}");
}

#[test]
fn agrees_with_the_cad_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let f = sentence(&mut rng, 2, &Shape::default());
        if let (Some(a), Some(b)) = (decide(&f), cad_decide(&f)) {
            assert_eq!(a, b, "{f}");
        }
    }
}

#[test]
fn counters_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let f = sentence(&mut rng, 3, &Shape::default());
        let (_, s) = check_truth(&f, &EngineConfig::default());
        assert!(s.implicants_used <= s.implicants_generated, "{f}");
        assert!(s.samples_tried >= 1, "{f}");
    }
}
