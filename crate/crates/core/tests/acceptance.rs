//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::time::Instant;

use modmac::scalars::Params;
use modmac::verify::{self, CheckResult};

struct Criterion {
    id: usize,
    title: &'static str,
    run: fn() -> Vec<CheckResult>,
}

fn must<T>(r: modmac::Result<T>) -> T {
    r.unwrap_or_else(|e| panic!("setup failed: {e}"))
}

fn equinumerosity() -> Vec<CheckResult> {
    (2..=5).map(|m| verify::equinumerosity(m, 25)).collect()
}

fn newton() -> Vec<CheckResult> {
    [2, 3]
        .iter()
        .map(|&m| verify::newton_identity(&must(Params::symbolic(m)), 8, 20, 1000 * m as u64))
        .collect()
}

fn nl() -> Vec<CheckResult> {
    vec![verify::nl_agreement(9)]
}

fn creation_expansion() -> Vec<CheckResult> {
    [2, 3, 4]
        .iter()
        .map(|&m| must(verify::creation_expansion(m, 10)))
        .collect()
}

fn convolution() -> Vec<CheckResult> {
    [2, 3].iter().map(|&m| must(verify::convolution(m, 10))).collect()
}

fn modular_relation() -> Vec<CheckResult> {
    [2, 3, 4]
        .iter()
        .map(|&m| must(verify::modular_relation(m, 12)))
        .collect()
}

fn operator_agreement() -> Vec<CheckResult> {
    vec![
        must(verify::operator_agreement(2, 8)),
        must(verify::operator_agreement(3, 6)),
    ]
}

fn triangularity() -> Vec<CheckResult> {
    vec![must(verify::triangularity(2, 8)), must(verify::triangularity(3, 6))]
}

fn self_adjoint() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for m in [2, 3] {
        out.push(verify::self_adjoint(&must(Params::symbolic(m)), 6));
        out.push(verify::self_adjoint(&must(Params::eval_default(m)), 8));
    }
    out
}

fn separation() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for m in 2..=5 {
        out.push(must(verify::separation(m, 10)));
    }
    for m in [2, 3] {
        out.push(must(verify::collision_predicate(m, 500, 17 + m as u64)));
    }
    out
}

fn eigen_solve() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for m in [2, 3] {
        out.push(verify::eigen_solve(&must(Params::symbolic(m)), 5));
        out.push(verify::eigen_solve(&must(Params::eval_default(m)), 8));
    }
    out
}

fn schur_q() -> Vec<CheckResult> {
    vec![must(verify::schur_q_specialization(8))]
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "equinumerosity of m-regular and m-reduced partitions",
        run: equinumerosity,
    },
    Criterion {
        id: 2,
        title: "generalized Newton identity",
        run: newton,
    },
    Criterion {
        id: 3,
        title: "N_l closed forms agree with direct count",
        run: nl,
    },
    Criterion {
        id: 4,
        title: "R_n expansion in q_mu",
        run: creation_expansion,
    },
    Criterion {
        id: 5,
        title: "creation convolution",
        run: convolution,
    },
    Criterion {
        id: 6,
        title: "modular relation",
        run: modular_relation,
    },
    Criterion {
        id: 7,
        title: "X0 implementations agree",
        run: operator_agreement,
    },
    Criterion {
        id: 8,
        title: "X0 triangular with eigenvalue diagonal",
        run: triangularity,
    },
    Criterion {
        id: 9,
        title: "X0 self-adjoint",
        run: self_adjoint,
    },
    Criterion {
        id: 10,
        title: "eigenvalue separation and collision predicate",
        run: separation,
    },
    Criterion {
        id: 11,
        title: "eigen-solve and orthogonality",
        run: eigen_solve,
    },
    Criterion {
        id: 12,
        title: "q=0 specialization is Schur Q",
        run: schur_q,
    },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let results = (c.run)();
        let ok = results.iter().all(CheckResult::passed);
        let cases: usize = results.iter().map(|r| r.cases).sum();
        println!(
            "criterion {:>2} {}: {} ({} cases, {:.1}s)",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            cases,
            start.elapsed().as_secs_f64()
        );
        for r in results.iter().filter(|r| !r.passed()) {
            println!("    {}: {}", r.name, r.failure.as_deref().unwrap_or(""));
        }
        if !ok {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
