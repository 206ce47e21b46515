//! The built-in acceptance suite: exact reproduction of the worked examples
//! plus the oracle and property checks, each with a pinned runtime budget.
//! `run` prints one PASS/FAIL line per criterion and is shared by the CLI
//! self-test and the acceptance test target.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::descent::{self, Certificate};
use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, Field};
use crate::hermitian::{
    associated_system_canonical, transfer_hermitian, DivisionAlgebra, HermitianForm,
};
use crate::oracle;
use crate::quadforms::{
    self, hilbert, systems, witt, QuadraticForm,
};
use crate::quaternion::{AlgebraWithInvolution, QuaternionAlgebra};

#[derive(Debug, Clone, serde::Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub limit_seconds: f64,
    pub details: String,
}

#[derive(Default)]
pub struct SelftestOptions {
    pub seed: u64,
    pub filter: Option<String>,
}

type Criterion = (usize, &'static str, f64, fn(u64) -> Result<String>);

fn criteria() -> Vec<Criterion> {
    vec![
        (1, "remark-reproduction", 1.0, criterion_remark),
        (2, "erratum-system-counterexample", 1.0, criterion_erratum),
        (3, "descent-oracle-equivalence", 60.0, criterion_oracle_equivalence),
        (4, "transfer-system-identity", 30.0, criterion_transfer_identity),
        (5, "hermitian-roundtrip", 120.0, criterion_roundtrip),
        (6, "negative-quaternionic-cases", 5.0, criterion_negative_cases),
        (7, "hilbert-and-witt-oracles", 120.0, criterion_hilbert_witt),
        (8, "functional-independence", 120.0, criterion_functional_independence),
    ]
}

pub fn run_criterion(id: usize, seed: u64) -> Option<CriterionResult> {
    let (id, name, limit, f) = criteria().into_iter().find(|(i, ..)| *i == id)?;
    let start = Instant::now();
    let outcome = f(seed);
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, details) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, format!("error: {e}")),
    };
    if seconds > limit {
        passed = false;
    }
    Some(CriterionResult {
        id,
        name: name.to_string(),
        passed,
        seconds,
        limit_seconds: limit,
        details,
    })
}

/// Runs the acceptance criteria, printing one line per criterion.
pub fn run(opts: &SelftestOptions) -> Vec<CriterionResult> {
    let mut results = Vec::new();
    for (id, name, _, _) in criteria() {
        if let Some(filter) = &opts.filter {
            if !name.contains(filter.as_str()) {
                continue;
            }
        }
        let result = run_criterion(id, opts.seed).expect("known id");
        println!(
            "{} criterion-{} {} ({:.2}s, limit {:.0}s): {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.id,
            result.name,
            result.seconds,
            result.limit_seconds,
            result.details
        );
        results.push(result);
    }
    results
}

fn ensure(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg.to_string()))
    }
}

// ---------------------------------------------------------------------------
// criterion 1: the characteristic-2 worked example, exactly
// ---------------------------------------------------------------------------

fn criterion_remark(_seed: u64) -> Result<String> {
    let report = descent::remark_counterexample_check()?;
    ensure(report.norm_value == "t^4+t+1", "norm must be 1 + t + t^4")?;
    ensure(!report.norm_is_square, "norm must not be a square")?;
    ensure(report.q_value_first == "1", "q(v) must be 1")?;
    ensure(report.q_value_second == "t^3+1", "q(eta v + (1+eta) w) must be 1 + t^3")?;
    ensure(report.q_descends && !report.h_descends, "verdict must be: q yes, h no")?;
    Ok(report.verdict_line)
}

// ---------------------------------------------------------------------------
// criterion 2: the two-component system over Q(sqrt 2)
// ---------------------------------------------------------------------------

fn criterion_erratum(seed: u64) -> Result<String> {
    let report = descent::erratum_counterexample_check(20_000, seed)?;
    ensure(report.componentwise == vec!["yes", "yes"], "components must descend")?;
    ensure(report.system_decision == "no", "system must not descend")?;
    ensure(report.transfer_metabolic == "no", "metabolicity obstruction expected")?;
    Ok(report.verdict_line)
}

// ---------------------------------------------------------------------------
// criterion 3: decision versus exhaustive enumeration over GF(3)/GF(9)
// ---------------------------------------------------------------------------

fn criterion_oracle_equivalence(seed: u64) -> Result<String> {
    let f3 = Field::prime(3)?;
    let k = f3.radical_extension(Elem::Fp(2))?; // GF(9)
    let nonsquare = k
        .elements()
        .unwrap()
        .into_iter()
        .find(|e| !e.is_zero() && k.is_square(e).is_none())
        .expect("GF(9) has non-squares");
    // isometry representatives of regular forms of dim <= 3: diagonal with
    // last entry 1 or a non-square
    let mut forms = Vec::new();
    for dim in 1..=3usize {
        for last in [k.one(), nonsquare.clone()] {
            let mut entries = vec![k.one(); dim];
            entries[dim - 1] = last;
            forms.push(QuadraticForm::diagonal(k.clone(), &entries)?);
        }
    }
    // extra random regular forms for coverage beyond the representatives
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
    for dim in 1..=3usize {
        for _ in 0..4 {
            forms.push(QuadraticForm::random_regular(&k, dim, &mut rng));
        }
    }
    let mut agreements = 0usize;
    for q in &forms {
        let decide = quadforms::descent_decide(q)?.decision;
        ensure(decide.is_decided(), "finite decision must not be undecided")?;
        let oracle_says = oracle::quad_f_structure_exists(q);
        ensure(
            (decide == Decision::Yes) == oracle_says,
            "decision and exhaustive enumeration disagree",
        )?;
        agreements += 1;
    }
    Ok(format!("{agreements} forms, 100% agreement"))
}

// ---------------------------------------------------------------------------
// criterion 4: transfer of associated systems, exact matrix identity
// ---------------------------------------------------------------------------

fn criterion_transfer_identity(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1db7);
    let mut checked = 0usize;

    // quaternion tower: (Hamilton, gamma) extended to Q(sqrt 2)
    let qf = Field::rationals();
    let k = qf.radical_extension(qf.from_i64(2))?;
    let hamilton = AlgebraWithInvolution::canonical(QuaternionAlgebra::new(
        qf.clone(),
        qf.from_i64(-1),
        qf.from_i64(-1),
    )?);
    let ext_ring = DivisionAlgebra::Quaternion(hamilton.extend_scalars(&k));
    let one_q = qf.one();
    for _ in 0..100 {
        let dim = 1 + (rng.gen_range(0..2usize));
        let h = HermitianForm::random_even_regular(&ext_ring, 1, dim, &mut rng);
        let assoc_k = associated_system_canonical(&h)?;
        let lhs = systems::transfer_system(&assoc_k.system, &one_q);
        let th = transfer_hermitian(&h, &one_q)?;
        let rhs = associated_system_canonical(&th)?;
        ensure(lhs == rhs.system, "matrix identity fails over the quaternion tower")?;
        checked += 1;
    }

    // field tower: GF(3)/GF(9), D = F
    let f3 = Field::prime(3)?;
    let k9 = f3.radical_extension(Elem::Fp(2))?;
    let ring = DivisionAlgebra::Field(k9.clone());
    let one_3 = f3.one();
    for _ in 0..100 {
        let dim = 1 + (rng.gen_range(0..3usize));
        let h = HermitianForm::random_even_regular(&ring, 1, dim, &mut rng);
        let assoc_k = associated_system_canonical(&h)?;
        let lhs = systems::transfer_system(&assoc_k.system, &one_3);
        let th = transfer_hermitian(&h, &one_3)?;
        let rhs = associated_system_canonical(&th)?;
        ensure(lhs == rhs.system, "matrix identity fails over the field tower")?;
        checked += 1;
    }
    Ok(format!("{checked} random forms, zero failures"))
}

// ---------------------------------------------------------------------------
// criterion 5: extend, decide, construct, verify
// ---------------------------------------------------------------------------

fn criterion_roundtrip(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1);
    let qf = Field::rationals();
    let k = qf.radical_extension(qf.from_i64(2))?;
    let hamilton = AlgebraWithInvolution::canonical(QuaternionAlgebra::new(
        qf.clone(),
        qf.from_i64(-1),
        qf.from_i64(-1),
    )?);
    let base_ring = DivisionAlgebra::Quaternion(hamilton);
    let mut done = 0usize;
    for i in 0..50 {
        let dim = 1 + (i % 3);
        let h0 = HermitianForm::random_even_regular(&base_ring, 1, dim, &mut rng);
        let (hk, warning) = h0.extend_scalars(&k);
        ensure(warning.is_none(), "Hamilton must stay division over Q(sqrt 2)")?;
        let verdict = descent::hermitian_descent_construct(&hk, 40_000, seed ^ (i as u64))?;
        ensure(verdict.decision == Decision::Yes, "extended forms must descend")?;
        let Some(Certificate::Hermitian(cert)) = &verdict.certificate else {
            return Err(Error::InvalidInput("certificate must be constructed".into()));
        };
        ensure(cert.dim() == dim, "certificate dimension mismatch")?;
        let verification = verdict
            .verification
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("verification must run".into()))?;
        ensure(verification.passed, "certificate verification failed")?;
        done += 1;
    }
    Ok(format!("{done} roundtrips verified"))
}

// ---------------------------------------------------------------------------
// criterion 6: the two negative quaternionic cases, exactly
// ---------------------------------------------------------------------------

fn criterion_negative_cases(seed: u64) -> Result<String> {
    let qf = Field::rationals();
    let k = qf.radical_extension(qf.from_i64(2))?;
    // (-1, sqrt 2): nonsplit corestriction with class (-1, -2), symbol -1 at
    // the real place
    let alg = QuaternionAlgebra::new(k.clone(), k.from_i64(-1), k.eta()?)?;
    let qi = AlgebraWithInvolution::canonical(alg);
    let ring = DivisionAlgebra::Quaternion(qi);
    let h = HermitianForm::diagonal(ring.clone(), 1, &[ring.one()])?;
    let verdict = descent::quaternionic_descent_to_f(&h, 40_000, seed)?;
    ensure(verdict.decision == Decision::No, "(-1, sqrt 2) must be rejected")?;
    let descent::Obstruction::CorestrictionNonsplit(cor) = verdict
        .obstruction
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("obstruction missing".into()))?
    else {
        return Err(Error::InvalidInput("expected the corestriction obstruction".into()));
    };
    let (a, b) = cor
        .witness_class
        .clone()
        .ok_or_else(|| Error::InvalidInput("witness class missing".into()))?;
    ensure(a == "-1" && b == "-2", "corestriction class must be (-1, -2)")?;
    ensure(
        cor.obstruction_place.as_deref() == Some("infinity"),
        "the obstruction place must be the real one",
    )?;

    // <1, sqrt 2> over Hamilton_K: cor splits, transfer not hyperbolic
    let hamilton_k = AlgebraWithInvolution::canonical(QuaternionAlgebra::new(
        qf.clone(),
        qf.from_i64(-1),
        qf.from_i64(-1),
    )?)
    .extend_scalars(&k);
    let ring = DivisionAlgebra::Quaternion(hamilton_k);
    let h = HermitianForm::diagonal(
        ring.clone(),
        1,
        &[ring.one(), ring.from_center(&k.eta()?)],
    )?;
    let verdict = descent::hermitian_descent_decide(&h)?;
    ensure(verdict.decision == Decision::No, "<1, sqrt 2> must be rejected")?;
    let descent::Obstruction::TransferNotHyperbolic(report) = verdict
        .obstruction
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("obstruction missing".into()))?
    else {
        return Err(Error::InvalidInput("expected the transfer obstruction".into()));
    };
    // signature obstruction: the anisotropic kernel is positive
    let witt::KernelInvariants::Rational { signature, .. } = &report.kernel else {
        return Err(Error::InvalidInput("expected rational kernel data".into()));
    };
    ensure(signature.0 > 0 && signature.1 == 0, "expected a definite kernel")?;
    Ok("both negative cases rejected with the expected obstructions".into())
}

// ---------------------------------------------------------------------------
// criterion 7: Hilbert product formula and Witt-versus-stripping
// ---------------------------------------------------------------------------

fn criterion_hilbert_witt(seed: u64) -> Result<String> {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x27d4);
    // product formula on 500 random pairs
    let budget = 1u64 << 22;
    for _ in 0..500 {
        let a = loop {
            let n = rng.gen_range(-400i64..=400);
            let d = rng.gen_range(1i64..=40);
            if n != 0 {
                break BigRational::new(BigInt::from(n), BigInt::from(d));
            }
        };
        let b = loop {
            let n = rng.gen_range(-400i64..=400);
            let d = rng.gen_range(1i64..=40);
            if n != 0 {
                break BigRational::new(BigInt::from(n), BigInt::from(d));
            }
        };
        let sa = hilbert::squarefree_part(&a, budget)?;
        let sb = hilbert::squarefree_part(&b, budget)?;
        let mut prod = hilbert::hilbert_symbol_squarefree(&sa, &sb, &hilbert::Place::Infinity);
        for place in hilbert::candidate_places(&sa, &sb, budget)? {
            prod *= hilbert::hilbert_symbol_squarefree(&sa, &sb, &place);
        }
        ensure(prod == 1, "Hilbert product formula violated")?;
    }

    // Witt decomposition versus exhaustive stripping
    let fields: Vec<Field> = vec![
        Field::prime(2)?,
        Field::prime(3)?,
        Field::binary(2, 0b111)?,
        Field::prime(5)?,
        Field::prime(7)?,
        Field::binary(3, 0b1011)?,
        Field::prime(3)?.radical_extension(Elem::Fp(2))?,
    ];
    let mut compared = 0usize;
    for f in &fields {
        let order = f.order().unwrap() as u64;
        let dims: Vec<usize> = if f.char2() { vec![2, 4] } else { vec![1, 2, 3, 4] };
        for dim in dims {
            let cells = (dim * (dim + 1) / 2) as u32;
            let total = (order as u128).checked_pow(cells);
            let mut forms: Vec<QuadraticForm> = Vec::new();
            if total.is_some_and(|t| t <= 2048) {
                // exhaustive over all coefficient matrices
                let pool = f.elements().unwrap();
                let slots: Vec<(usize, usize)> = (0..dim)
                    .flat_map(|i| (i..dim).map(move |j| (i, j)))
                    .collect();
                for combo in crate::search::odometer(pool, slots.len()) {
                    let mut coeffs = vec![f.zero(); dim * dim];
                    for ((i, j), c) in slots.iter().zip(combo) {
                        coeffs[i * dim + j] = c;
                    }
                    let q = QuadraticForm::new(f.clone(), dim, coeffs)?;
                    if q.is_regular() {
                        forms.push(q);
                    }
                }
            } else {
                // seeded random regular sample plus all diagonal forms when
                // they are regular and few
                if !f.char2() && (order as u128).pow(dim as u32) <= 1000 {
                    let pool = f.elements().unwrap();
                    for combo in crate::search::odometer(pool, dim) {
                        if combo.iter().any(Elem::is_zero) {
                            continue;
                        }
                        forms.push(QuadraticForm::diagonal(f.clone(), &combo)?);
                    }
                }
                for _ in 0..100 {
                    forms.push(QuadraticForm::random_regular(f, dim, &mut rng));
                }
            }
            for q in &forms {
                let report = witt::witt_decompose(q)?;
                let (index, aniso) = oracle::witt_by_stripping(q);
                ensure(
                    report.witt_index == index && report.kernel_dim == aniso,
                    "Witt decomposition disagrees with exhaustive stripping",
                )?;
                compared += 1;
            }
        }
    }
    Ok(format!("500 symbol pairs and {compared} forms, zero failures"))
}

// ---------------------------------------------------------------------------
// criterion 8: verdicts are independent of the choice of functional
// ---------------------------------------------------------------------------

fn criterion_functional_independence(seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x94d0);
    let qf = Field::rationals();
    let k = qf.radical_extension(qf.from_i64(2))?;
    let hamilton_k = AlgebraWithInvolution::canonical(QuaternionAlgebra::new(
        qf.clone(),
        qf.from_i64(-1),
        qf.from_i64(-1),
    )?)
    .extend_scalars(&k);
    let ring = DivisionAlgebra::Quaternion(hamilton_k);
    let mut yes = 0usize;
    let mut no = 0usize;
    for i in 0..20 {
        let dim = 1 + (i % 2);
        let h = HermitianForm::random_even_regular(&ring, 1, dim, &mut rng);
        let baseline = descent::hermitian_descent_decide(&h)?.decision;
        for _ in 0..3 {
            let c = loop {
                let c = qf.from_i64(rng.gen_range(-9i64..=9));
                if !c.is_zero() {
                    break c;
                }
            };
            let scaled = descent::hermitian_descent_decide_scaled(&h, &c)?.decision;
            ensure(scaled == baseline, "verdict changed under a scaled functional")?;
        }
        match baseline {
            Decision::Yes => yes += 1,
            Decision::No => no += 1,
            Decision::Undecided => {}
        }
    }
    Ok(format!("20 instances stable under 3 scales each (yes: {yes}, no: {no})"))
}
