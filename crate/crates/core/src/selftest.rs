//! Seeded end-to-end check of every closed form against its oracle and of
//! the codec against the worked examples and random messages.
//!
//! ```
//! use fibcirc::selftest::{run, SelfTestConfig};
//!
//! let report = run(&SelfTestConfig { seed: 7, max_n: 4, ..SelfTestConfig::default() });
//! assert!(report.outcomes.iter().any(|o| o.name.contains("fib3 worked example") && o.passed));
//! ```

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::seq::{IndexedMutRandom, IndexedRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circulant::{
    build_f_matrix, build_g_matrix, build_h_matrix, det_bruteforce, det_closed_f, det_closed_g, det_closed_h,
    eigenvalues_closed_f, eigenvalues_dft, RatioCirculantParams,
};
use crate::codec::{decode, encode, verify_packet, Algorithm, BlockRecord, Codec, CodecError, Corruption};
use crate::polyseq::{
    char_roots, fibonacci_binet, fibonacci_seq, lucas_binet, lucas_seq, IntRecurrenceParams, RecurrenceParams,
};

pub const DEFAULT_SEED: u64 = 0x5EED_F1B0;

/// Relative tolerance for closed-form vs DFT eigenvalues.
pub const EIGEN_TOL: f64 = 1e-8;
/// Relative tolerance for closed-form vs oracle determinants.
pub const DET_TOL: f64 = 1e-6;
/// Relative tolerance for Binet vs recurrence.
pub const BINET_TOL: f64 = 1e-8;
/// Minimum distance kept between `r` and `±α`, `±β` in random draws.
pub const ROOT_CLEARANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestConfig {
    pub seed: u64,
    /// Upper bound on matrix orders in the randomized spectral suites.
    pub max_n: usize,
    pub spectral_draws: usize,
    pub round_trip_messages: usize,
    pub perturbations: usize,
}

impl Default for SelfTestConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, max_n: 12, spectral_draws: 200, round_trip_messages: 500, perturbations: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
    pub elapsed: Duration,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={}", self.seed)?;
        for o in &self.outcomes {
            let status = if o.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{status}] {} ({:.1} ms): {}", o.name, o.elapsed.as_secs_f64() * 1e3, o.detail)?;
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        writeln!(f, "{passed}/{} suites passed in {:.2} s", self.outcomes.len(), self.elapsed.as_secs_f64())
    }
}

/// Relative error with a unit floor on the scale.
pub fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

pub fn rel_err_complex(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm().max(1.0)
}

/// Random valid ratio-circulant parameters: `p, q ∈ [-5, 5]`, `a, r ∈ [0.5, 3]`,
/// `r` at least [`ROOT_CLEARANCE`] from `±α` and `±β`, `n ∈ 1..=max_n`.
pub fn draw_ratio_params<R: Rng>(rng: &mut R, max_n: usize) -> RatioCirculantParams {
    loop {
        let p = rng.random_range(-5.0..=5.0);
        let q = rng.random_range(-5.0..=5.0);
        let Ok(params) = RecurrenceParams::new(p, q) else { continue };
        let a = rng.random_range(0.5..=3.0);
        let r: f64 = rng.random_range(0.5..=3.0);
        let roots = char_roots(&params);
        let clear = [roots.alpha, -roots.alpha, roots.beta, -roots.beta]
            .iter()
            .all(|root| (r - root).abs() >= ROOT_CLEARANCE);
        if !clear {
            continue;
        }
        let n = rng.random_range(1..=max_n.max(1));
        if let Ok(rp) = RatioCirculantParams::new(params, a, r, n) {
            return rp;
        }
    }
}

const MESSAGE_SYMBOLS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ ";

pub fn random_message<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.random_range(1..=max_len);
    (0..len).map(|_| *MESSAGE_SYMBOLS.choose(rng).unwrap() as char).collect()
}

fn timed(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    match result {
        Ok(detail) => Outcome { name, passed: true, detail, elapsed },
        Err(detail) => Outcome { name, passed: false, detail, elapsed },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example_one() -> Result<String, String> {
    let packet = encode("SUMEYRA", Algorithm::Fib3).map_err(|e| e.to_string())?;
    ensure(packet.n == 3, || format!("n = {}", packet.n))?;
    ensure(packet.records[0].flat() == [347, 21, 23, 15, 7, 20, 3, 2, 2], || format!("{:?}", packet.records))?;
    let solution = Codec::new(Algorithm::Fib3).solve_block(&packet, 0).map_err(|e| e.to_string())?;
    let e: Vec<i128> = solution.partial_products.iter().map(|(_, v)| *v).collect();
    ensure(e == [82, 74, 80, 9, 9, 10], || format!("e = {e:?}"))?;
    ensure(solution.hidden == 27, || format!("x = {}", solution.hidden))?;
    ensure(solution.rebuilt.rows() == [[21, 23, 15], [7, 27, 20], [3, 2, 2]], || "block".into())?;
    let text = decode(&packet).map_err(|e| e.to_string())?;
    ensure(text == "SUMEYRA", || text.clone())?;
    Ok("d = 347, e = (82, 74, 80, 9, 9, 10), x = 27".into())
}

fn example_two() -> Result<String, String> {
    let packet = encode("GOOD", Algorithm::Lucas2).map_err(|e| e.to_string())?;
    ensure(packet.n == 2, || format!("n = {}", packet.n))?;
    ensure(packet.records[0].flat() == [-216, 8, 16, 5], || format!("{:?}", packet.records))?;
    let solution = Codec::new(Algorithm::Lucas2).solve_block(&packet, 0).map_err(|e| e.to_string())?;
    ensure(solution.partial_products == [(3, 31), (4, 53)], || format!("{:?}", solution.partial_products))?;
    ensure(solution.hidden == 16, || format!("x = {}", solution.hidden))?;
    let text = decode(&packet).map_err(|e| e.to_string())?;
    ensure(text == "GOOD", || text.clone())?;
    Ok("d = -216, e = (31, 53), x = 16".into())
}

fn pinned_determinants() -> Result<String, String> {
    let classic = IntRecurrenceParams::new(1, 1).unwrap();
    let oracle_g = |n| det_bruteforce(&build_g_matrix(&classic, n).unwrap().to_dense().unwrap());
    let oracle_h = |n| det_bruteforce(&build_h_matrix(&classic, n).unwrap().to_dense().unwrap());
    let checks = [
        ("det G3", det_closed_g(&classic, 3).unwrap(), oracle_g(3), 4),
        ("det G2", det_closed_g(&classic, 2).unwrap(), oracle_g(2), 0),
        ("det G4", det_closed_g(&classic, 4).unwrap(), oracle_g(4), -35),
        ("det H2", det_closed_h(&classic, 2).unwrap().value, oracle_h(2), -8),
    ];
    for (name, closed, oracle, pinned) in checks {
        ensure(closed == BigInt::from(pinned) && oracle == BigInt::from(pinned), || {
            format!("{name}: closed {closed}, oracle {oracle}, expected {pinned}")
        })?;
    }
    Ok("det G3 = 4, det G2 = 0, det G4 = -35, det H2 = -8".into())
}

fn sequence_identities<R: Rng>(rng: &mut R, draws: usize) -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < draws {
        let Ok(params) = RecurrenceParams::new(rng.random_range(-5.0..=5.0), rng.random_range(-5.0..=5.0)) else {
            continue;
        };
        done += 1;
        let fib = fibonacci_seq(&params, 31);
        let luc = lucas_seq(&params, 31);
        for n in 0..=30u32 {
            worst = worst
                .max(rel_err(fibonacci_binet(&params, n), fib[n as usize]))
                .max(rel_err(lucas_binet(&params, n), luc[n as usize]));
        }
        let roots = char_roots(&params);
        let (p, q) = (params.p(), params.q());
        let root_err = (roots.alpha + roots.beta - p)
            .abs()
            .max((roots.alpha * roots.beta + q).abs())
            .max(((roots.alpha - roots.beta).powi(2) - params.discriminant()).abs());
        ensure(root_err <= 1e-10 * params.discriminant().max(1.0), || format!("roots of p={p}, q={q}: {root_err:e}"))?;
    }
    ensure(worst <= BINET_TOL, || format!("worst Binet error {worst:e}"))?;
    Ok(format!("{draws} draws, n <= 30, worst Binet rel error {worst:.2e}"))
}

fn eigen_suite(draws: &[RatioCirculantParams]) -> Result<String, String> {
    let mut worst = 0.0f64;
    for rp in draws {
        let closed = eigenvalues_closed_f(rp).map_err(|e| e.to_string())?;
        let dft = eigenvalues_dft(&build_f_matrix(rp));
        for (m, (c, d)) in closed.iter().zip(dft.iter()).enumerate() {
            let err = rel_err_complex(*c, *d);
            worst = worst.max(err);
            ensure(err <= EIGEN_TOL, || format!("{rp:?} m={m}: closed {c}, dft {d}, rel {err:e}"))?;
        }
    }
    Ok(format!("{} draws, worst rel error {worst:.2e}", draws.len()))
}

fn det_suite(draws: &[RatioCirculantParams]) -> Result<String, String> {
    let (mut worst_eig, mut worst_lu) = (0.0f64, 0.0f64);
    for rp in draws {
        let closed = det_closed_f(rp).map_err(|e| e.to_string())?;
        let matrix = build_f_matrix(rp);
        let product = eigenvalues_dft(&matrix).product().re;
        let lu = det_bruteforce(&matrix.to_dense().map_err(|e| e.to_string())?);
        let (e1, e2) = (rel_err(closed, product), rel_err(closed, lu));
        worst_eig = worst_eig.max(e1);
        worst_lu = worst_lu.max(e2);
        ensure(e1 <= DET_TOL && e2 <= DET_TOL, || {
            format!("{rp:?}: closed {closed:e}, eigen product {product:e}, elimination {lu:e}")
        })?;
    }
    Ok(format!(
        "{} draws, worst rel error vs eigen product {worst_eig:.2e}, vs elimination {worst_lu:.2e}",
        draws.len()
    ))
}

fn exact_grid(max_n: usize) -> Result<String, String> {
    let (mut cases, mut fallbacks) = (0, 0);
    for p in -3i64..=3 {
        for q in -3i64..=3 {
            let Ok(params) = IntRecurrenceParams::new(p, q) else { continue };
            for n in 1..=max_n.min(8) {
                let g_oracle = det_bruteforce(&build_g_matrix(&params, n).unwrap().to_dense().unwrap());
                let g_closed = det_closed_g(&params, n).map_err(|e| e.to_string())?;
                ensure(g_closed == g_oracle, || format!("G p={p} q={q} n={n}: {g_closed} vs {g_oracle}"))?;
                let h_oracle = det_bruteforce(&build_h_matrix(&params, n).unwrap().to_dense().unwrap());
                let h = det_closed_h(&params, n).map_err(|e| e.to_string())?;
                ensure(h.value == h_oracle, || format!("H p={p} q={q} n={n}: {} vs {h_oracle}", h.value))?;
                cases += 1;
                fallbacks += usize::from(h.fallback_used);
            }
        }
    }
    Ok(format!("{cases} (p, q, n) cases exact, {fallbacks} fallbacks"))
}

fn round_trip<R: Rng>(rng: &mut R, messages: usize) -> Result<String, String> {
    let mut counts = Vec::new();
    let mut first_failure = None;
    for alg in [Algorithm::Fib3, Algorithm::Lucas2] {
        let mut failed = 0;
        for _ in 0..messages {
            let msg = random_message(rng, 200);
            let packet = encode(&msg, alg).map_err(|e| e.to_string())?;
            let problem = match decode(&packet) {
                Ok(text) if text == msg => continue,
                Ok(text) => format!("{alg}: {msg:?} -> {text:?}"),
                Err(e) => format!("{alg}: {msg:?}: {e}"),
            };
            failed += 1;
            first_failure.get_or_insert(problem);
        }
        counts.push(format!("{alg} {}/{messages}", messages - failed));
    }
    let summary = format!("exact round trips: {}", counts.join(", "));
    match first_failure {
        None => Ok(summary),
        Some(first) => Err(format!("{summary}; first failure: {first}")),
    }
}

fn corruption<R: Rng>(rng: &mut R, perturbations: usize) -> Result<String, String> {
    let mut packet = encode("SUMEYRA", Algorithm::Fib3).map_err(|e| e.to_string())?;
    packet.records[0].d = 348;
    let expected = CodecError::CorruptPacket {
        block: 1,
        corruption: Corruption::NonIntegral { numerator: 320, denominator: 12 },
    };
    let got = decode(&packet);
    ensure(got == Err(expected.clone()), || format!("d = 348 gave {got:?}"))?;

    let mut flagged = 0;
    for _ in 0..perturbations {
        let alg = *[Algorithm::Fib3, Algorithm::Lucas2].choose(rng).unwrap();
        let mut packet = encode(&random_message(rng, 60), alg).map_err(|e| e.to_string())?;
        let record: &mut BlockRecord = packet.records.choose_mut(rng).unwrap();
        let delta = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
        let field = rng.random_range(0..=record.retained.len());
        if field == 0 {
            record.d += delta;
        } else {
            record.retained[field - 1] += delta;
        }
        flagged += usize::from(!verify_packet(&packet).passed());
    }
    Ok(format!(
        "d = 348 -> x = 320/12 rejected; {flagged}/{perturbations} single-field perturbations flagged ({:.1}%)",
        100.0 * flagged as f64 / perturbations.max(1) as f64
    ))
}

/// Runs every suite and returns the report; never panics on a failed check.
pub fn run(config: &SelfTestConfig) -> SelfTestReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let draws: Vec<RatioCirculantParams> =
        (0..config.spectral_draws).map(|_| draw_ratio_params(&mut rng, config.max_n)).collect();

    let outcomes = vec![
        timed("fib3 worked example", example_one),
        timed("lucas2 worked example", example_two),
        timed("pinned determinants", pinned_determinants),
        timed("Binet vs recurrence", || sequence_identities(&mut rng, config.spectral_draws)),
        timed("ratio circulant eigenvalues", || eigen_suite(&draws)),
        timed("ratio circulant determinant", || det_suite(&draws)),
        timed("G/H closed forms exact", || exact_grid(config.max_n)),
        timed("codec round trip", || round_trip(&mut rng, config.round_trip_messages)),
        timed("corruption detection", || corruption(&mut rng, config.perturbations)),
    ];
    SelfTestReport { seed: config.seed, outcomes, elapsed: start.elapsed() }
}
