//! Top-level descent engines: decisions with verified certificates on yes,
//! independently recomputable obstructions on no, and honest undecided
//! outcomes when a budget runs out.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, Field};
use crate::hermitian::{
    self, associated_system, associated_system_canonical, decision_form, transfer_hermitian,
    DElem, DivisionAlgebra, HermitianForm,
};
use crate::linalg;
use crate::quadforms::{
    self, systems, witt, QuadraticForm, QuadraticSystem, WittReport,
};
use crate::quaternion::{
    self, alg_descent, cor_split_test, AlgebraWithInvolution, CorSplitReport, InvolutionClass,
    QuatElem,
};
use crate::search;

#[derive(Debug, Clone)]
pub struct DescentVerdict {
    pub decision: Decision,
    /// Which criterion produced the decision.
    pub route: String,
    pub certificate: Option<Certificate>,
    pub obstruction: Option<Obstruction>,
    pub verification: Option<Verification>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Certificate {
    QuadraticForm(QuadraticForm),
    System(QuadraticSystem),
    Hermitian(HermitianForm),
    AlgebraWithInvolution(AlgebraWithInvolution),
    Pair {
        algebra: AlgebraWithInvolution,
        form: HermitianForm,
    },
}

#[derive(Debug, Clone)]
pub enum Obstruction {
    /// Witt data of a non-hyperbolic transfer.
    TransferNotHyperbolic(WittReport),
    CorestrictionNonsplit(CorSplitReport),
    /// The transferred system vanishes on no subspace of half dimension.
    TransferSystemNotMetabolic,
    /// The skew line contains no element squaring into the base field.
    SkewLineNotRational,
    /// A complete enumeration found no descended structure.
    ExhaustedEnumeration,
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub checks: Vec<(String, Decision)>,
    pub passed: bool,
}

impl Verification {
    fn from_checks(checks: Vec<(String, Decision)>) -> Verification {
        let passed = checks.iter().all(|(_, d)| *d != Decision::No);
        Verification { checks, passed }
    }
}

impl DescentVerdict {
    fn new(decision: Decision, route: &str) -> DescentVerdict {
        DescentVerdict {
            decision,
            route: route.to_string(),
            certificate: None,
            obstruction: None,
            verification: None,
            notes: Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// quadratic forms
// ---------------------------------------------------------------------------

const QUAD_ROUTE: &str = "transfer-hyperbolicity criterion for regular forms";

pub fn quad_descent_decide(q: &QuadraticForm) -> Result<DescentVerdict> {
    let d = quadforms::descent_decide(q)?;
    let mut verdict = DescentVerdict::new(d.decision, QUAD_ROUTE);
    if d.decision == Decision::No {
        verdict.obstruction = d.transfer_report.map(Obstruction::TransferNotHyperbolic);
    } else if let Some(report) = d.transfer_report {
        verdict
            .notes
            .push(format!("transfer Witt index {}", report.witt_index));
    }
    Ok(verdict)
}

pub fn quad_descent_construct(q: &QuadraticForm, budget: u64, seed: u64) -> Result<DescentVerdict> {
    let mut verdict = quad_descent_decide(q)?;
    verdict.route = format!("{QUAD_ROUTE}; explicit F-structure search");
    if verdict.decision != Decision::Yes {
        return Ok(verdict);
    }
    match quadforms::descent_construct(q, budget, seed)? {
        Some(rho) => {
            let verification = verify_quad_certificate(q, &rho)?;
            if !verification.passed {
                return Err(Error::InvalidInput(
                    "internal inconsistency: constructed form fails certificate verification"
                        .into(),
                ));
            }
            verdict.verification = Some(verification);
            verdict.certificate = Some(Certificate::QuadraticForm(rho));
        }
        None => {
            verdict
                .notes
                .push("construction budget exhausted; the decision stands".into());
        }
    }
    Ok(verdict)
}

/// Invariant-level comparison of a K-form with the extension of a candidate
/// descent: exact isometry over finite extensions, and the decision-capable
/// invariant bundle (discriminant class, transfer Witt data, hyperbolicity
/// of the difference transfer) over extensions of the rationals.
pub fn verify_quad_certificate(q: &QuadraticForm, rho: &QuadraticForm) -> Result<Verification> {
    let k = q.field().clone();
    let rho_k = rho.extend_scalars(&k);
    let mut checks = Vec::new();
    checks.push((
        "dimension match".into(),
        if rho_k.dim() == q.dim() { Decision::Yes } else { Decision::No },
    ));
    if k.is_finite() {
        checks.push(("exact isometry over the finite extension".into(), witt::isometric(q, &rho_k)?));
        return Ok(Verification::from_checks(checks));
    }
    // discriminant ratio is a square in K
    let disc = |form: &QuadraticForm| -> Elem {
        let polar = form.polar();
        linalg::det(&k, &polar.gram_rows())
    };
    let d1 = disc(q);
    let d2 = disc(&rho_k);
    if !d2.is_zero() {
        let ratio = k.div(&d1, &d2)?;
        checks.push((
            "discriminant ratio is a square".into(),
            if k.is_square(&ratio).is_some() { Decision::Yes } else { Decision::No },
        ));
    }
    let t1 = quadforms::transfer_form(q);
    let t2 = quadforms::transfer_form(&rho_k);
    let (r1, r2) = (witt::witt_decompose(&t1), witt::witt_decompose(&t2));
    match (r1, r2) {
        (Ok(a), Ok(b)) => checks.push((
            "transfer Witt data match".into(),
            if a.same_class(&b) { Decision::Yes } else { Decision::No },
        )),
        _ => checks.push(("transfer Witt data match".into(), Decision::Undecided)),
    }
    let difference = q.direct_sum(&rho_k.neg());
    let td = quadforms::transfer_form(&difference);
    checks.push((
        "difference transfer hyperbolic".into(),
        witt::is_hyperbolic(&td)?,
    ));
    Ok(Verification::from_checks(checks))
}

// ---------------------------------------------------------------------------
// systems
// ---------------------------------------------------------------------------

const SYSTEM_ROUTE: &str =
    "single F-structure search with the system-transfer metabolicity obstruction";

pub fn system_descent(sys: &QuadraticSystem, budget: u64, seed: u64) -> Result<DescentVerdict> {
    let out = systems::system_descent_search(sys, budget, seed)?;
    let mut verdict = DescentVerdict::new(out.decision, SYSTEM_ROUTE);
    // componentwise decisions, reported for contrast with the system verdict
    let mut componentwise = Vec::new();
    for (i, q) in sys.components().iter().enumerate() {
        let comp = if q.is_regular() {
            quadforms::descent_decide(q)?.decision
        } else {
            Decision::Undecided
        };
        componentwise.push(format!("component {} descent: {}", i + 1, comp));
    }
    verdict.notes.extend(componentwise);
    match out.decision {
        Decision::Yes => {
            let descended = out.descended.expect("yes carries the descended system");
            let basis = out.basis.expect("yes carries its basis");
            let mut checks = vec![(
                "basis is K-independent".into(),
                if linalg::independent(sys.field(), &basis) { Decision::Yes } else { Decision::No },
            )];
            let re_extended = descended.extend_scalars(sys.field());
            let on_basis = sys.apply_basis(&basis);
            checks.push((
                "values and pairings on the basis reproduce the descended system".into(),
                if re_extended == on_basis { Decision::Yes } else { Decision::No },
            ));
            verdict.verification = Some(Verification::from_checks(checks));
            verdict.certificate = Some(Certificate::System(descended));
        }
        Decision::No => {
            verdict.obstruction = Some(if out.transfer_metabolic == Some(Decision::No) {
                Obstruction::TransferSystemNotMetabolic
            } else {
                Obstruction::ExhaustedEnumeration
            });
        }
        Decision::Undecided => {
            verdict
                .notes
                .push("search budget exhausted without a proof either way".into());
        }
    }
    if let Some(m) = out.transfer_metabolic {
        verdict
            .notes
            .push(format!("transferred system metabolic: {m}"));
    }
    Ok(verdict)
}

// ---------------------------------------------------------------------------
// hermitian forms over an extended algebra
// ---------------------------------------------------------------------------

const HERMITIAN_ROUTE: &str = "hyperbolicity of the hermitian transfer";

fn check_extended_division(h: &HermitianForm, notes: &mut Vec<String>) -> Result<()> {
    if let DivisionAlgebra::Quaternion(q) = h.ring() {
        match quaternion::is_split(&q.alg)? {
            Decision::Yes => {
                return Err(Error::InvalidInput(
                    "the coefficient algebra splits over the extension; the criterion needs a \
                     division algebra"
                        .into(),
                ));
            }
            Decision::Undecided => {
                notes.push("could not certify the extended algebra is division".into());
            }
            Decision::No => {}
        }
    }
    Ok(())
}

pub fn hermitian_descent_decide(h: &HermitianForm) -> Result<DescentVerdict> {
    let one = h
        .ring()
        .center()
        .base()
        .ok_or(Error::NoExtension)?
        .one();
    hermitian_descent_decide_scaled(h, &one)
}

/// The decision with the canonical functional replaced by scale * s; any
/// nonzero scale yields the same verdict, which obstruction-stability tests
/// exercise.
pub fn hermitian_descent_decide_scaled(h: &HermitianForm, scale: &Elem) -> Result<DescentVerdict> {
    if !h.is_regular()? {
        return Err(Error::NotRegular);
    }
    if !h.is_even() {
        return Err(Error::InvalidInput("the descent criterion requires an even form".into()));
    }
    let mut notes = Vec::new();
    check_extended_division(h, &mut notes)?;
    let transfer = transfer_hermitian(h, scale)?;
    let decision = hermitian::hermitian_is_hyperbolic(&transfer)?;
    let mut verdict = DescentVerdict::new(decision, HERMITIAN_ROUTE);
    verdict.notes = notes;
    match decision {
        Decision::No => {
            let q = decision_form(&transfer)?;
            verdict.obstruction = Some(Obstruction::TransferNotHyperbolic(
                witt::witt_decompose(&q)?,
            ));
        }
        Decision::Yes | Decision::Undecided => {}
    }
    // corroborating cross-check on the associated system: a descended form
    // has a metabolic transferred system
    if let Ok(assoc) = associated_system_canonical(h) {
        let transferred = systems::transfer_system(&assoc.system, scale);
        let (metabolic, _) = systems::system_is_metabolic(&transferred, 4_000, 0)?;
        verdict.notes.push(format!(
            "associated-system transfer metabolic (necessary for descent): {metabolic}"
        ));
        if decision == Decision::Yes && metabolic == Decision::No {
            return Err(Error::InvalidInput(
                "inconsistent cross-check: transfer hyperbolic but system transfer not \
                 metabolic"
                    .into(),
            ));
        }
    }
    Ok(verdict)
}

pub fn hermitian_descent_construct(
    h: &HermitianForm,
    budget: u64,
    seed: u64,
) -> Result<DescentVerdict> {
    let mut verdict = hermitian_descent_decide(h)?;
    verdict.route = format!("{HERMITIAN_ROUTE}; anisotropic-vector splitting");
    if verdict.decision != Decision::Yes {
        return Ok(verdict);
    }
    let d_ext = h.ring().clone();
    let d0 = d_ext
        .restrict_to_base()
        .expect("decide already required an extended algebra");
    match descend_by_splitting(h, &d0, budget, seed)? {
        Some((cert, splitting_basis)) => {
            let mut verification = verify_hermitian_certificate(h, &cert)?;
            verification.checks.push((
                "certificate basis induces an F-structure on the associated system".into(),
                if basis_induces_system_f_structure(h, &splitting_basis)? {
                    Decision::Yes
                } else {
                    Decision::No
                },
            ));
            verification.passed =
                verification.checks.iter().all(|(_, d)| *d != Decision::No);
            if !verification.passed {
                return Err(Error::InvalidInput(
                    "internal inconsistency: constructed form fails certificate verification"
                        .into(),
                ));
            }
            verdict.verification = Some(verification);
            verdict.certificate = Some(Certificate::Hermitian(cert));
        }
        None => {
            verdict
                .notes
                .push("construction budget exhausted; the decision stands".into());
        }
    }
    Ok(verdict)
}

/// The splitting basis of a descended form spans an F-rational substructure
/// of the associated system: all component values and pairings on the
/// induced flattened basis lie in F.
fn basis_induces_system_f_structure(
    h: &HermitianForm,
    basis: &[Vec<DElem>],
) -> Result<bool> {
    let d = h.ring();
    let k = d.center();
    let deg = d.degree_sq();
    let assoc = match associated_system_canonical(h) {
        Ok(a) => a,
        Err(_) => return Ok(true), // no canonical system to check
    };
    // flatten: v_a * d_s, coordinates over the center
    let mut flat_vectors: Vec<Vec<Elem>> = Vec::new();
    for v in basis {
        for s in 0..deg {
            let mut ring_coords = vec![k.zero(); deg];
            ring_coords[s] = k.one();
            let unit = d.from_coords(&ring_coords);
            let scaled: Vec<DElem> = v.iter().map(|c| d.mul(c, &unit)).collect();
            let mut coords = Vec::with_capacity(h.dim() * deg);
            for entry in &scaled {
                coords.extend(d.coords(entry));
            }
            flat_vectors.push(coords);
        }
    }
    for (i, u) in flat_vectors.iter().enumerate() {
        if !assoc
            .system
            .evaluate(u)
            .iter()
            .all(|val| k.s_apply(val).is_zero())
        {
            return Ok(false);
        }
        for w in flat_vectors.iter().skip(i + 1) {
            if !assoc
                .system
                .polar_eval(u, w)
                .iter()
                .all(|val| k.s_apply(val).is_zero())
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedy construction: repeatedly find a vector whose length is a nonzero
/// F-rational element of Symd, split it off, and recurse; hyperbolic
/// remainders reaching dimension zero need no vectors.
fn descend_by_splitting(
    h: &HermitianForm,
    d0: &DivisionAlgebra,
    budget: u64,
    seed: u64,
) -> Result<Option<(HermitianForm, Vec<Vec<DElem>>)>> {
    let d = h.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = h.clone();
    let mut entries: Vec<DElem> = Vec::new();
    // frame: basis of the current complement in original coordinates
    let mut frame: Vec<Vec<DElem>> = (0..h.dim())
        .map(|r| {
            let mut v = vec![d.zero(); h.dim()];
            v[r] = d.one();
            v
        })
        .collect();
    let mut chosen: Vec<Vec<DElem>> = Vec::new();
    let mut remaining = budget;
    while current.dim() > 0 {
        match find_rational_vector(&current, d0, &mut remaining, &mut rng) {
            Some(v) => {
                // v in current coordinates -> original coordinates
                let mut v_orig = vec![d.zero(); h.dim()];
                for (r, c) in v.iter().enumerate() {
                    for i in 0..h.dim() {
                        let t = d.mul(&frame[r][i], c);
                        v_orig[i] = d.add(&v_orig[i], &t);
                    }
                }
                chosen.push(v_orig);
                let (alpha, rest, complement) = current.split_off_with_basis(&v)?;
                entries.push(restrict_delem(current.ring(), d0, &alpha));
                // complement vectors are in current coordinates
                frame = complement
                    .iter()
                    .map(|w| {
                        let mut w_orig = vec![d.zero(); h.dim()];
                        for (r, c) in w.iter().enumerate() {
                            for i in 0..h.dim() {
                                let t = d.mul(&frame[r][i], c);
                                w_orig[i] = d.add(&w_orig[i], &t);
                            }
                        }
                        w_orig
                    })
                    .collect();
                current = rest;
            }
            None => return Ok(None),
        }
    }
    Ok(Some((
        HermitianForm::diagonal(d0.clone(), h.lambda(), &entries)?,
        chosen,
    )))
}

fn restrict_delem(d_ext: &DivisionAlgebra, d0: &DivisionAlgebra, x: &DElem) -> DElem {
    let k = d_ext.center();
    let coords = d_ext.coords(x);
    let down: Vec<Elem> = coords
        .iter()
        .map(|c| k.in_base(c).expect("selected to be F-rational"))
        .collect();
    d0.from_coords(&down)
}

fn is_rational_delem(d_ext: &DivisionAlgebra, x: &DElem) -> bool {
    let k = d_ext.center();
    d_ext.coords(x).iter().all(|c| k.in_base(c).is_some())
}

fn find_rational_vector<R: rand::Rng>(
    h: &HermitianForm,
    _d0: &DivisionAlgebra,
    remaining: &mut u64,
    rng: &mut R,
) -> Option<Vec<DElem>> {
    let d_ext = h.ring();
    let k = d_ext.center();
    let n = h.dim();
    let deg = d_ext.degree_sq();
    let coords_to_vec = |coords: &[Elem]| -> Vec<DElem> {
        (0..n)
            .map(|r| d_ext.from_coords(&coords[r * deg..(r + 1) * deg]))
            .collect()
    };
    let accept = |v: &Vec<DElem>| -> bool {
        let val = h.evaluate(v, v);
        d_ext.is_invertible(&val) && is_rational_delem(d_ext, &val)
    };
    for coords in search::vector_sweep_structured(k, n * deg) {
        if *remaining == 0 {
            return None;
        }
        *remaining -= 1;
        let v = coords_to_vec(&coords);
        if accept(&v) {
            return Some(v);
        }
    }
    while *remaining > 0 {
        *remaining -= 1;
        let coords: Vec<Elem> = (0..n * deg).map(|_| k.random(rng)).collect();
        let v = coords_to_vec(&coords);
        if accept(&v) {
            return Some(v);
        }
    }
    None
}

/// Certificate verification: the extension of the candidate matches the
/// input on every decision-capable invariant.
pub fn verify_hermitian_certificate(
    h: &HermitianForm,
    cert: &HermitianForm,
) -> Result<Verification> {
    let k = h.ring().center().clone();
    let (cert_k, _) = cert.extend_scalars(&k);
    let mut checks = Vec::new();
    checks.push((
        "dimension match".into(),
        if cert_k.dim() == h.dim() { Decision::Yes } else { Decision::No },
    ));
    checks.push((
        "lambda and evenness match".into(),
        if cert_k.lambda() == h.lambda() && cert_k.is_even() == h.is_even() {
            Decision::Yes
        } else {
            Decision::No
        },
    ));
    let q1 = decision_form(h)?;
    let q2 = decision_form(&cert_k)?;
    if k.is_finite() {
        checks.push((
            "associated forms isometric over the finite extension".into(),
            witt::isometric(&q1, &q2)?,
        ));
        return Ok(Verification::from_checks(checks));
    }
    let d1 = linalg::det(&k, &q1.polar().gram_rows());
    let d2 = linalg::det(&k, &q2.polar().gram_rows());
    if !d2.is_zero() && !k.char2() {
        let ratio = k.div(&d1, &d2)?;
        checks.push((
            "associated-form discriminant ratio is a square".into(),
            if k.is_square(&ratio).is_some() { Decision::Yes } else { Decision::No },
        ));
    }
    let t1 = quadforms::transfer_form(&q1);
    let t2 = quadforms::transfer_form(&q2);
    match (witt::witt_decompose(&t1), witt::witt_decompose(&t2)) {
        (Ok(a), Ok(b)) => checks.push((
            "associated-form transfer Witt data match".into(),
            if a.same_class(&b) { Decision::Yes } else { Decision::No },
        )),
        _ => checks.push(("associated-form transfer Witt data match".into(), Decision::Undecided)),
    }
    let diff = q1.direct_sum(&q2.neg());
    checks.push((
        "difference transfer hyperbolic".into(),
        witt::is_hyperbolic(&quadforms::transfer_form(&diff))?,
    ));
    Ok(Verification::from_checks(checks))
}

// ---------------------------------------------------------------------------
// hermitian forms over a quaternion algebra genuinely defined over K
// ---------------------------------------------------------------------------

const QUATERNIONIC_ROUTE_SYMPL: &str =
    "corestriction split test + trace-form descent (symplectic)";
const QUATERNIONIC_ROUTE_ORTH: &str =
    "corestriction split test + skew-line rationality + trace-form descent (orthogonal)";

pub fn quaternionic_descent_to_f(
    h: &HermitianForm,
    budget: u64,
    seed: u64,
) -> Result<DescentVerdict> {
    let DivisionAlgebra::Quaternion(qi) = h.ring().clone() else {
        return Err(Error::InvalidInput(
            "this route requires a hermitian form over a quaternion algebra".into(),
        ));
    };
    let k = qi.alg.center().clone();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    if !h.is_regular()? {
        return Err(Error::NotRegular);
    }
    let class = qi.involution_class();
    let expected_lambda = -class.epsilon();
    if h.lambda() != expected_lambda {
        return Err(Error::InvalidInput(format!(
            "type/lambda mismatch: this involution type needs lambda = {expected_lambda}"
        )));
    }
    let route = match class {
        InvolutionClass::Symplectic => QUATERNIONIC_ROUTE_SYMPL,
        InvolutionClass::Orthogonal => QUATERNIONIC_ROUTE_ORTH,
    };
    let mut notes = Vec::new();
    match quaternion::is_split(&qi.alg)? {
        Decision::Yes => {
            return Err(Error::InvalidInput(
                "the quaternion algebra splits; the criterion needs a division algebra".into(),
            ));
        }
        Decision::Undecided => notes.push("could not certify the algebra is division".into()),
        Decision::No => {}
    }
    let cor = cor_split_test(&qi.alg, budget, seed)?;
    notes.push(format!("corestriction class split: {}", cor.verdict));
    if cor.verdict == Decision::No {
        let mut verdict = DescentVerdict::new(Decision::No, route);
        verdict.notes = notes;
        verdict.obstruction = Some(Obstruction::CorestrictionNonsplit(cor));
        return Ok(verdict);
    }
    // for an orthogonal involution, the skew line must square into F
    let (skew_decision, skew_u): (Option<Decision>, Option<QuatElem>) = match class {
        InvolutionClass::Symplectic => (None, None),
        InvolutionClass::Orthogonal => match quaternion::skew_line_rational_element(&qi)? {
            Some(u) => (Some(Decision::Yes), Some(u)),
            None => (Some(Decision::No), None),
        },
    };
    if skew_decision == Some(Decision::No) {
        let mut verdict = DescentVerdict::new(Decision::No, route);
        verdict.notes = notes;
        verdict.obstruction = Some(Obstruction::SkewLineNotRational);
        return Ok(verdict);
    }
    // the trace forms whose descent is required: the criterion is
    // existential over the generators of the skew line squaring into F, and
    // away from characteristic 2 there are two classes of them up to
    // F-scaling (u and eta u), which can genuinely differ
    let trace_forms: Vec<(String, QuadraticForm)> = match class {
        InvolutionClass::Symplectic => {
            vec![("trace form".into(), hermitian::jacobson_form(h)?)]
        }
        InvolutionClass::Orthogonal => {
            let u = skew_u.clone().expect("orthogonal yes carries the element");
            let mut forms = vec![(
                "trace form at u".into(),
                hermitian::skew_form(h, &DElem::Quat(u.clone()))?,
            )];
            if !k.char2() {
                let eta = k.eta()?;
                let eta_u = qi.alg.scale(&eta, &u);
                forms.push((
                    "trace form at eta*u".into(),
                    hermitian::skew_form(h, &DElem::Quat(eta_u))?,
                ));
            }
            forms
        }
    };
    let mut form_decision = Decision::No;
    let mut last_obstruction: Option<Obstruction> = None;
    for (label, q) in &trace_forms {
        let d = quadforms::descent_decide(q)?;
        notes.push(format!("{label} descends: {}", d.decision));
        match d.decision {
            Decision::Yes => {
                form_decision = Decision::Yes;
                last_obstruction = None;
                break;
            }
            Decision::Undecided => {
                if form_decision == Decision::No {
                    form_decision = Decision::Undecided;
                }
            }
            Decision::No => {
                if last_obstruction.is_none() {
                    last_obstruction =
                        d.transfer_report.map(Obstruction::TransferNotHyperbolic);
                }
            }
        }
    }
    if form_decision == Decision::No {
        let mut verdict = DescentVerdict::new(Decision::No, route);
        verdict.notes = notes;
        verdict.obstruction = last_obstruction;
        return Ok(verdict);
    }
    let decision = cor.verdict.and(form_decision);
    let mut verdict = DescentVerdict::new(decision, route);
    verdict.notes = notes;
    if decision != Decision::Yes {
        verdict
            .notes
            .push("a conjunct is undecided; no verdict either way".into());
        return Ok(verdict);
    }
    // full certificate: descend the algebra with involution, rebase the form
    // and descend it over the descended pair
    let alg_out = alg_descent(&qi, budget, seed)?;
    let (Some(descended_pair), Some(presentation)) = (alg_out.descended, alg_out.presentation)
    else {
        verdict
            .notes
            .push("algebra presentation search exhausted; decision stands".into());
        return Ok(verdict);
    };
    let rebased = rebase_hermitian(h, &qi, &descended_pair, &presentation)?;
    let mut checks = vec![(
        "presentation realizes the descended algebra inside the input".into(),
        Decision::Yes,
    )];
    match descend_by_splitting(&rebased, &DivisionAlgebra::Quaternion(descended_pair.clone()), budget, seed)? {
        Some((cert, _)) => {
            let verification = verify_hermitian_certificate(&rebased, &cert)?;
            checks.extend(verification.checks);
            let verification = Verification::from_checks(checks);
            if !verification.passed {
                return Err(Error::InvalidInput(
                    "internal inconsistency: constructed form fails certificate verification"
                        .into(),
                ));
            }
            verdict.verification = Some(verification);
            verdict.certificate = Some(Certificate::Pair {
                algebra: descended_pair,
                form: cert,
            });
            if let Some(u) = skew_u {
                verdict
                    .notes
                    .push(format!("skew-line element with rational square: {}", qi.alg.fmt_elem(&u)));
            }
        }
        None => {
            verdict.certificate = Some(Certificate::AlgebraWithInvolution(descended_pair));
            verdict
                .notes
                .push("form construction budget exhausted; algebra certificate only".into());
        }
    }
    Ok(verdict)
}

/// Rewrites a hermitian form over (Q, sigma) through the presentation basis
/// (1, X, Y, XY) as a form over the scalar extension of the descended pair,
/// verifying that the involution transports correctly.
fn rebase_hermitian(
    h: &HermitianForm,
    qi: &AlgebraWithInvolution,
    descended: &AlgebraWithInvolution,
    presentation: &[QuatElem],
) -> Result<HermitianForm> {
    let k = qi.alg.center().clone();
    let target = descended.extend_scalars(&k);
    // change-of-coordinates matrix: columns are the presentation basis
    let cols: linalg::Matrix = presentation.iter().map(|e| e.to_vec()).collect();
    let m = linalg::transpose(&k, &cols);
    let m_inv = linalg::invert(&k, &m)?;
    let rewrite = |x: &QuatElem| -> QuatElem {
        let coords = linalg::mat_vec(&k, &m_inv, x.as_ref());
        [coords[0].clone(), coords[1].clone(), coords[2].clone(), coords[3].clone()]
    };
    // involution transport check on the basis
    for (idx, b) in presentation.iter().enumerate() {
        let lhs = rewrite(&qi.theta(b));
        let mut unit = target.alg.zero();
        unit[idx] = k.one();
        let rhs = target.theta(&unit);
        if lhs != rhs {
            return Err(Error::InvalidInput(
                "involution does not transport along the found presentation".into(),
            ));
        }
    }
    let n = h.dim();
    let mut gram = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let DElem::Quat(g) = h.gram(i, j) else { unreachable!("quaternion form") };
            gram.push(DElem::Quat(rewrite(g)));
        }
    }
    HermitianForm::new(DivisionAlgebra::Quaternion(target), h.lambda(), n, gram)
}

// ---------------------------------------------------------------------------
// built-in reproductions
// ---------------------------------------------------------------------------

/// Worked characteristic-2 example over F = GF(2)(t), K = F(eta) with
/// eta^2 + eta = t: the totally singular associated form of the bilinear
/// form <1, 1 + t^2 + t eta> descends to F on an explicit basis, while the
/// bilinear form itself cannot, because the norm of its determinant is not
/// a square.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RemarkReport {
    pub norm_value: String,
    pub norm_is_square: bool,
    pub q_value_first: String,
    pub q_value_second: String,
    pub polar_identically_zero: bool,
    pub q_descends: bool,
    pub descended_diagonal: Vec<String>,
    pub h_descends: bool,
    pub verdict_line: String,
}

pub fn remark_counterexample_check() -> Result<RemarkReport> {
    let f2 = Field::prime(2)?;
    let f = Field::rational_function(&f2)?;
    let t = f.var_t()?;
    let k = f.artin_schreier_extension(t.clone())?;
    // w = 1 + a*delta + a*eta with a = delta = t
    let x_part = f.add(&f.one(), &f.mul(&t, &t));
    let w = k.from_coords(x_part, t.clone());

    // (1) the norm value and its non-squareness
    let norm = k.norm_to_base(&w);
    let t4 = f.pow_i64(&t, 4)?;
    let expected = f.add(&f.add(&f.one(), &t), &t4);
    if norm != expected {
        return Err(Error::InvalidInput("norm value does not match 1 + t + t^4".into()));
    }
    let norm_is_square = f.is_square(&norm).is_some();
    if norm_is_square {
        return Err(Error::InvalidInput("1 + t + t^4 must not be a square".into()));
    }

    // (2) the associated totally singular form descends on an explicit basis
    let ring = DivisionAlgebra::Field(k.clone());
    let h = HermitianForm::diagonal(
        ring.clone(),
        1,
        &[DElem::Scalar(k.one()), DElem::Scalar(w.clone())],
    )?;
    let assoc = associated_system(&h, &[ring.one()])?;
    let q = &assoc.system.components()[0];
    let eta = k.eta()?;
    let v = vec![k.one(), k.zero()];
    let u = vec![eta.clone(), k.add(&k.one(), &eta)];
    let qv = q.evaluate(&v);
    if qv != k.one() {
        return Err(Error::InvalidInput("q(v) must be 1".into()));
    }
    let qu = q.evaluate(&u);
    let t3 = f.pow_i64(&t, 3)?;
    let expected_u = k.lift(&f.add(&f.one(), &t3));
    if qu != expected_u {
        return Err(Error::InvalidInput("q(eta v + (1 + eta) w) must be 1 + t^3".into()));
    }
    let polar_zero = q.polar().gram_rows().iter().flatten().all(Elem::is_zero);
    if !polar_zero {
        return Err(Error::InvalidInput("the associated form must be totally singular".into()));
    }
    let basis = vec![v.clone(), u.clone()];
    if !linalg::independent(&k, &basis) {
        return Err(Error::InvalidInput("descent basis must be K-independent".into()));
    }
    if !q.polar_eval(&v, &u).is_zero() {
        return Err(Error::InvalidInput("pairing on the descent basis must vanish".into()));
    }
    // values and pairings are F-rational: an explicit descent of q
    let one_fold = QuadraticSystem::new(vec![q.clone()])?;
    let descended = systems::descend_by_basis(&one_fold, &basis)?;
    let descended_q = &descended.components()[0];
    let q_descends = true;

    // (3) the bilinear form h has no descent: determinants of descended
    // bilinear forms lie in F * (K^x)^2, whose norms are squares in F
    let det = w.clone(); // det of diag<1, w>
    let h_descends = f.is_square(&k.norm_to_base(&det)).is_some();
    if h_descends {
        return Err(Error::InvalidInput(
            "the determinant-norm obstruction must reject a descent of h".into(),
        ));
    }

    Ok(RemarkReport {
        norm_value: f.fmt_elem(&norm),
        norm_is_square,
        q_value_first: k.fmt_elem(&qv),
        q_value_second: k.fmt_elem(&qu),
        polar_identically_zero: polar_zero,
        q_descends,
        descended_diagonal: (0..2)
            .map(|i| f.fmt_elem(descended_q.coeff(i, i)))
            .collect(),
        h_descends: false,
        verdict_line: "q descends, h does not".into(),
    })
}

/// The two-component system over Q(sqrt 2) whose components both descend
/// while the system does not: (<1>, <3 + 2 sqrt 2>).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ErratumSystemReport {
    pub alpha: String,
    pub alpha_square_root: String,
    pub componentwise: Vec<String>,
    pub system_decision: String,
    pub transfer_metabolic: String,
    pub verdict_line: String,
}

pub fn erratum_counterexample_check(budget: u64, seed: u64) -> Result<ErratumSystemReport> {
    let qf = Field::rationals();
    let k = qf.radical_extension(qf.from_i64(2))?;
    let alpha = k.from_coords(qf.from_i64(3), qf.from_i64(2));
    let root = k
        .is_square(&alpha)
        .ok_or_else(|| Error::InvalidInput("3 + 2 sqrt 2 must be a square in K".into()))?;
    let sys = QuadraticSystem::new(vec![
        QuadraticForm::diagonal(k.clone(), &[k.one()])?,
        QuadraticForm::diagonal(k.clone(), std::slice::from_ref(&alpha))?,
    ])?;
    let mut componentwise = Vec::new();
    for q in sys.components() {
        let d = quadforms::descent_decide(q)?;
        if d.decision != Decision::Yes {
            return Err(Error::InvalidInput(
                "both components must descend individually".into(),
            ));
        }
        componentwise.push(d.decision.to_string());
    }
    let verdict = system_descent(&sys, budget, seed)?;
    if verdict.decision != Decision::No {
        return Err(Error::InvalidInput("the system must fail to descend".into()));
    }
    let metabolic = match &verdict.obstruction {
        Some(Obstruction::TransferSystemNotMetabolic) => "no".to_string(),
        other => {
            return Err(Error::InvalidInput(format!(
                "expected the metabolicity obstruction, found {other:?}"
            )));
        }
    };
    Ok(ErratumSystemReport {
        alpha: k.fmt_elem(&alpha),
        alpha_square_root: k.fmt_elem(&root),
        componentwise: componentwise.clone(),
        system_decision: verdict.decision.to_string(),
        transfer_metabolic: metabolic,
        verdict_line: format!(
            "componentwise: {}; system: {}",
            componentwise.join(","),
            verdict.decision
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::QuaternionAlgebra;

    fn q_sqrt2() -> Field {
        let q = Field::rationals();
        q.radical_extension(q.from_i64(2)).unwrap()
    }

    fn hamilton_over(k: &Field) -> AlgebraWithInvolution {
        let f = Field::rationals();
        let alg = QuaternionAlgebra::new(f.clone(), f.from_i64(-1), f.from_i64(-1)).unwrap();
        AlgebraWithInvolution::canonical(alg).extend_scalars(k)
    }

    #[test]
    fn quad_descent_by_square_scaling() {
        // <3 + 2 sqrt 2> = <(1 + sqrt 2)^2> descends to <1>
        let k = q_sqrt2();
        let f = Field::rationals();
        let alpha = k.from_coords(f.from_i64(3), f.from_i64(2));
        let q = QuadraticForm::diagonal(k.clone(), &[alpha]).unwrap();
        let verdict = quad_descent_construct(&q, 50_000, 1).unwrap();
        assert_eq!(verdict.decision, Decision::Yes);
        let Some(Certificate::QuadraticForm(rho)) = &verdict.certificate else {
            panic!("expected a constructed form");
        };
        assert_eq!(rho.dim(), 1);
        assert!(verdict.verification.as_ref().unwrap().passed);
    }

    #[test]
    fn quad_descent_rejects_sqrt2_line() {
        let k = q_sqrt2();
        let q = QuadraticForm::diagonal(k.clone(), &[k.eta().unwrap()]).unwrap();
        let verdict = quad_descent_decide(&q).unwrap();
        assert_eq!(verdict.decision, Decision::No);
        assert!(matches!(
            verdict.obstruction,
            Some(Obstruction::TransferNotHyperbolic(_))
        ));
    }

    #[test]
    fn non_regular_input_is_rejected() {
        let k = q_sqrt2();
        let q = QuadraticForm::zero_form(k, 1);
        assert!(matches!(quad_descent_decide(&q), Err(Error::NotRegular)));
    }

    #[test]
    fn hermitian_decide_examples_over_hamilton() {
        let k = q_sqrt2();
        let qf = Field::rationals();
        let ring = DivisionAlgebra::Quaternion(hamilton_over(&k));
        // <1, sqrt 2> does not descend
        let h = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[ring.one(), ring.from_center(&k.eta().unwrap())],
        )
        .unwrap();
        let verdict = hermitian_descent_decide(&h).unwrap();
        assert_eq!(verdict.decision, Decision::No);
        assert!(matches!(
            verdict.obstruction,
            Some(Obstruction::TransferNotHyperbolic(_))
        ));
        // <1, 3 + 2 sqrt 2> descends; certificate is found
        let alpha = k.from_coords(qf.from_i64(3), qf.from_i64(2));
        let h = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[ring.one(), ring.from_center(&alpha)],
        )
        .unwrap();
        let verdict = hermitian_descent_construct(&h, 60_000, 2).unwrap();
        assert_eq!(verdict.decision, Decision::Yes);
        let Some(Certificate::Hermitian(cert)) = &verdict.certificate else {
            panic!("expected a hermitian certificate");
        };
        assert_eq!(cert.dim(), 2);
        assert!(verdict.verification.as_ref().unwrap().passed);
    }

    #[test]
    fn budget_zero_keeps_the_decision() {
        let k = q_sqrt2();
        let ring = DivisionAlgebra::Quaternion(hamilton_over(&k));
        let h = HermitianForm::diagonal(ring.clone(), 1, &[ring.one()]).unwrap();
        let verdict = hermitian_descent_construct(&h, 0, 0).unwrap();
        assert_eq!(verdict.decision, Decision::Yes);
        assert!(verdict.certificate.is_none());
        assert!(verdict.notes.iter().any(|n| n.contains("budget")));
    }

    #[test]
    fn quaternionic_route_negative_cases() {
        let k = q_sqrt2();
        // nonsplit corestriction: (-1, sqrt 2)
        let alg =
            QuaternionAlgebra::new(k.clone(), k.from_i64(-1), k.eta().unwrap()).unwrap();
        let qi = AlgebraWithInvolution::canonical(alg);
        let ring = DivisionAlgebra::Quaternion(qi);
        let h = HermitianForm::diagonal(ring.clone(), 1, &[ring.one()]).unwrap();
        let verdict = quaternionic_descent_to_f(&h, 40_000, 3).unwrap();
        assert_eq!(verdict.decision, Decision::No);
        assert!(matches!(
            verdict.obstruction,
            Some(Obstruction::CorestrictionNonsplit(_))
        ));

        // cor splits but the trace form fails: <1, sqrt 2> over Hamilton_K
        let ring = DivisionAlgebra::Quaternion(hamilton_over(&k));
        let h = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[ring.one(), ring.from_center(&k.eta().unwrap())],
        )
        .unwrap();
        let verdict = quaternionic_descent_to_f(&h, 40_000, 3).unwrap();
        assert_eq!(verdict.decision, Decision::No);
        assert!(matches!(
            verdict.obstruction,
            Some(Obstruction::TransferNotHyperbolic(_))
        ));
    }

    #[test]
    fn quaternionic_route_positive_with_certificate() {
        let k = q_sqrt2();
        let ring = DivisionAlgebra::Quaternion(hamilton_over(&k));
        let qf = Field::rationals();
        let h = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[ring.one(), ring.from_center(&k.lift(&qf.from_i64(2)))],
        )
        .unwrap();
        let verdict = quaternionic_descent_to_f(&h, 60_000, 4).unwrap();
        assert_eq!(verdict.decision, Decision::Yes);
        match &verdict.certificate {
            Some(Certificate::Pair { algebra, form }) => {
                assert_eq!(algebra.involution_class(), InvolutionClass::Symplectic);
                assert_eq!(form.dim(), 2);
            }
            other => panic!("expected a full certificate, got {other:?}"),
        }
        assert!(verdict.verification.as_ref().unwrap().passed);
    }

    #[test]
    fn remark_reproduction() {
        let report = remark_counterexample_check().unwrap();
        assert_eq!(report.norm_value, "t^4+t+1");
        assert!(!report.norm_is_square);
        assert_eq!(report.q_value_first, "1");
        assert_eq!(report.q_value_second, "t^3+1");
        assert!(report.q_descends);
        assert!(!report.h_descends);
        assert_eq!(report.verdict_line, "q descends, h does not");
    }

    #[test]
    fn erratum_reproduction() {
        let report = erratum_counterexample_check(20_000, 5).unwrap();
        assert_eq!(report.componentwise, vec!["yes", "yes"]);
        assert_eq!(report.system_decision, "no");
        assert_eq!(report.transfer_metabolic, "no");
        assert_eq!(report.alpha_square_root, "1+e");
    }

    #[test]
    fn obstruction_stability_under_scaled_functional() {
        let k = q_sqrt2();
        let qf = Field::rationals();
        let ring = DivisionAlgebra::Quaternion(hamilton_over(&k));
        let h = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[ring.one(), ring.from_center(&k.eta().unwrap())],
        )
        .unwrap();
        for c in [1i64, 2, -3] {
            let scale = qf.from_i64(c);
            let verdict = hermitian_descent_decide_scaled(&h, &scale).unwrap();
            assert_eq!(verdict.decision, Decision::No);
        }
    }
}
