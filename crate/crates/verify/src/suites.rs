//! The verification suites. Each suite draws from its own generator seeded by
//! `sha256(seed ∥ suite name)`, so running suites concurrently never changes
//! a result.

use std::f64::consts::PI;
use std::thread;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use modspin_core::car::{
    graded_twisted_equivalence, quasifree_modular_oracle, random_grading_antiunitary,
    twist_relations_check, twisted_locality_check, FockModel, QuasiFreeState,
};
use modspin_core::lorentz::{
    cone_check, lorentz_residual, pct_region_check, reflection_i1, rotation_lift, CoverElement,
    DoubleCone, LorentzMatrix, MinkVector, ProperCoverElement, Sl2c, Wedge,
};
use modspin_core::numerics::CMatrix;
use modspin_core::rep_models::{
    check_property_ii, finite_sl2_rep, spin_statistics_table, verify_identity_chain, Identity,
    SampleSet, Spin, MIN_WAVEFUNCTIONS,
};
use modspin_core::standard_subspace::{flow_invariance_check, StandardSubspace};
use modspin_core::tomita::{left_tensor_factor, modular_data, schmidt_vector, verify_modular_theorem};
use modspin_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::{Suite, SuiteConfig};
use crate::report::{CheckRecord, Report};

pub const PROPERTY_II_GRID: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
pub const BOOST_GRID: [f64; 5] = [-0.25, -0.1, 0.0, 0.15, 0.3];
pub const CONE_PARAMETERS: [f64; 3] = [0.1, 0.7, 2.0];
pub const STANDARD_SUBSPACES: usize = 60;
pub const COVER_PAIRS: usize = 120;

pub fn suite_rng(seed: u64, suite: Suite) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(suite.name().as_bytes());
    let digest: [u8; 32] = h.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

struct Recorder {
    suite: Suite,
    tol: f64,
    records: Vec<CheckRecord>,
}

impl Recorder {
    fn push(&mut self, id: impl Into<String>, anchor: &str, params: impl Into<String>, residual: f64, ms: f64) {
        let tol = self.tol;
        self.push_tol(id, anchor, params, residual, tol, ms);
    }

    fn push_tol(
        &mut self,
        id: impl Into<String>,
        anchor: &str,
        params: impl Into<String>,
        residual: f64,
        tol: f64,
        ms: f64,
    ) {
        self.records.push(CheckRecord::new(
            self.suite.name(),
            id,
            anchor,
            params,
            residual,
            tol,
            ms,
        ));
    }

    fn error(&mut self, id: impl Into<String>, anchor: &str, params: &str, err: &Error, ms: f64) {
        self.push(id, anchor, format!("{params};error={err}"), f64::INFINITY, ms);
    }
}

/// Runs the configured suites and assembles the report.
pub fn run(cfg: &SuiteConfig) -> Report {
    let started_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Report::new(cfg.seed, started_at, run_suites(cfg))
}

/// All records, in suite order regardless of completion order.
pub fn run_suites(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    thread::scope(|s| {
        let handles: Vec<_> = cfg
            .suites
            .iter()
            .map(|&suite| (suite, s.spawn(move || run_suite(cfg, suite))))
            .collect();
        handles
            .into_iter()
            .flat_map(|(suite, h)| {
                h.join().unwrap_or_else(|_| {
                    vec![CheckRecord::new(
                        suite.name(),
                        "suite",
                        suite.anchors()[0],
                        "error=panicked",
                        f64::INFINITY,
                        cfg.tol_for(suite),
                        0.0,
                    )]
                })
            })
            .collect()
    })
}

pub fn run_suite(cfg: &SuiteConfig, suite: Suite) -> Vec<CheckRecord> {
    let mut rng = suite_rng(cfg.seed, suite);
    let mut rec = Recorder {
        suite,
        tol: cfg.tol_for(suite),
        records: Vec::new(),
    };
    match suite {
        Suite::PropertyIi => property_ii(cfg, &mut rec),
        Suite::StandardSubspace => standard_subspace(&mut rng, &mut rec),
        Suite::Tomita => tomita(&mut rng, &mut rec),
        Suite::Quasifree => quasifree(cfg, &mut rng, &mut rec),
        Suite::Twist => twist(cfg, &mut rng, &mut rec),
        Suite::IdentityChain => identity_chain(cfg, &mut rng, &mut rec),
        Suite::SpinStatistics => spin_statistics(cfg, &mut rng, &mut rec),
        Suite::WedgeGeometry => wedge_geometry(cfg, &mut rng, &mut rec),
        Suite::Covering => covering(cfg, &mut rng, &mut rec),
    }
    rec.records
}

fn property_ii(cfg: &SuiteConfig, rec: &mut Recorder) {
    for m in cfg.dims.clone() {
        let (rep, ms) = timed(|| finite_sl2_rep(m));
        let rep = match rep {
            Ok(r) => r,
            Err(e) => {
                rec.error(format!("m{m}"), "sl2-boost-conjugation", &format!("m={m}"), &e, ms);
                continue;
            }
        };
        let (report, ms) = timed(|| check_property_ii(&rep, &PROPERTY_II_GRID));
        let per = ms / (PROPERTY_II_GRID.len() as f64 + 1.0);
        for (t, r) in &report.residuals {
            rec.push(format!("m{m}_t{t}"), "sl2-boost-conjugation", format!("m={m};t={t}"), *r, per);
        }
        rec.push(
            format!("m{m}_doubled"),
            "sl2-boost-conjugation",
            format!("m={m};grid=2t"),
            report.doubled_max_residual,
            per,
        );
        rec.push(format!("m{m}_bracket"), "sl2-bracket", format!("m={m}"), report.bracket_residual, per);
    }
}

fn standard_subspace(rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let grid = [-1.0, -0.5, 0.3, 1.0];
    for i in 0..STANDARD_SUBSPACES {
        let n = 1 + i % 8;
        let params = format!("index={i};n={n}");
        let (res, ms) = timed(|| {
            let k = StandardSubspace::random(n, &mut *rng);
            flow_invariance_check(&k, &grid)
        });
        match res {
            Ok(r) => {
                let per = ms / 8.0;
                let id = |law: &str| format!("k{i}_{law}");
                rec.push(id("j_square"), "ss-j-involution", params.clone(), r.j_square_residual, per);
                rec.push(id("j_delta_j"), "ss-j-inverts-delta", params.clone(), r.j_delta_j_residual, per);
                rec.push(id("flow"), "ss-flow-invariance", params.clone(), r.max_flow_distance(), per);
                rec.push(id("j_complement"), "ss-j-complement", params.clone(), r.conjugation_distance, per);
                rec.push(
                    id("double_complement"),
                    "ss-j-complement",
                    params.clone(),
                    r.double_complement_distance,
                    per,
                );
                rec.push(
                    id("complement_delta"),
                    "ss-complement-delta",
                    params.clone(),
                    r.complement_delta_residual,
                    per,
                );
                rec.push(id("s_fixes_k"), "ss-polar-reassembly", params.clone(), r.s_fixes_k_residual, per);
                rec.push(id("reassembly"), "ss-polar-reassembly", params, r.reassembly_residual, per);
            }
            Err(e) => rec.error(format!("k{i}"), "ss-flow-invariance", &params, &e, ms),
        }
    }
}

fn tomita(rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let grid = [-1.0, 0.5, 2.0];
    for n in [2usize, 3] {
        for trial in 0..2 {
            let params = format!("n={n};state={trial}");
            let (res, ms) = timed(|| {
                let m = left_tensor_factor(n)?;
                let omega = modspin_core::random::random_vector(n * n, &mut *rng);
                let md = modular_data(&m, &omega)?;
                verify_modular_theorem(&md, &m, &grid, 20, &mut *rng)
            });
            match res {
                Ok(r) => {
                    let per = ms / 5.0;
                    let id = |x: &str| format!("n{n}_s{trial}_{x}");
                    rec.push(id("flow"), "tomita-flow", params.clone(), r.flow_membership, per);
                    rec.push(id("commutant"), "tomita-commutant", params.clone(), r.commutant_membership, per);
                    rec.push(id("kms"), "kms-boundary", params.clone(), r.kms_residual, per);
                    rec.push(id("s_action"), "tomita-s-action", params.clone(), r.s_consistency, per);
                    rec.push(id("polar"), "tomita-polar", params, r.reassembly, per);
                }
                Err(e) => rec.error(format!("n{n}_s{trial}"), "tomita-flow", &params, &e, ms),
            }
        }
        // product state spectrum: log Δ = {log λ_i - log λ_j}
        let params = format!("n={n};state=schmidt");
        let (res, ms) = timed(|| -> Result<f64, Error> {
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let m = left_tensor_factor(n)?;
            let md = modular_data(&m, &schmidt_vector(&weights))?;
            let got = md.log_delta_spectrum()?;
            let mut want: Vec<f64> = weights
                .iter()
                .flat_map(|a| weights.iter().map(move |b| a.ln() - b.ln()))
                .collect();
            want.sort_by(f64::total_cmp);
            if got.len() != want.len() {
                return Ok(f64::INFINITY);
            }
            Ok(got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        });
        match res {
            Ok(r) => rec.push(format!("n{n}_schmidt_spectrum"), "tomita-product-spectrum", params, r, ms),
            Err(e) => rec.error(format!("n{n}_schmidt_spectrum"), "tomita-product-spectrum", &params, &e, ms),
        }
    }
}

fn quasifree(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    for k in 1..=cfg.modes {
        let total = k + 1;
        let params = format!("modes={k};ambient_modes={total}");
        let (res, ms) = timed(|| {
            let fm = FockModel::new(total)?;
            let g = QuasiFreeState::random(total, 0.1, 0.9, &mut *rng)?;
            let region: Vec<usize> = (0..k).collect();
            quasifree_modular_oracle(&fm, &region, &g)
        });
        match res {
            Ok(r) => {
                rec.push(format!("k{k}_spectrum"), "quasifree-log-delta-spectrum", params.clone(), r.spectrum_residual, ms / 2.0);
                rec.push(format!("k{k}_covariance"), "quasifree-covariance", params, r.covariance_residual, ms / 2.0);
            }
            Err(e) => rec.error(format!("k{k}"), "quasifree-log-delta-spectrum", &params, &e, ms),
        }
    }
}

fn twist(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    for n in 1..=cfg.modes {
        let params = format!("modes={n}");
        let (res, ms) = timed(|| {
            let fm = FockModel::new(n)?;
            let all: Vec<usize> = (0..n).collect();
            let mut even: Vec<CMatrix> = Vec::new();
            let mut odd: Vec<CMatrix> = Vec::new();
            for mask in 0..1usize << (2 * n) {
                let op = fm.majorana_monomial(&all, mask)?.to_dense();
                if mask.count_ones() % 2 == 0 {
                    even.push(op);
                } else {
                    odd.push(op);
                }
            }
            let vs: Vec<_> = (0..3).map(|_| random_grading_antiunitary(&fm, &mut *rng)).collect();
            twist_relations_check(&fm, &even, &odd, &vs)
        });
        match res {
            Ok(r) => {
                let per = ms / 4.0;
                rec.push(format!("n{n}_even"), "twist-even", params.clone(), r.even_residual, per);
                rec.push(format!("n{n}_odd"), "twist-odd", params.clone(), r.odd_residual, per);
                rec.push(format!("n{n}_antiunitary"), "twist-antiunitary", params.clone(), r.antiunitary_residual, per);
                rec.push(
                    format!("n{n}_square"),
                    "twist-square-grading",
                    params.clone(),
                    r.square_residual.max(r.fourth_power_residual).max(r.unitarity_residual),
                    per,
                );
            }
            Err(e) => rec.error(format!("n{n}_relations"), "twist-even", &params, &e, ms),
        }
        if n >= 2 {
            let split = n / 2;
            let (a, b): (Vec<usize>, Vec<usize>) = ((0..split).collect(), (split..n).collect());
            let p = format!("modes={n};region_a={a:?};region_b={b:?}");
            let (res, ms) = timed(|| twisted_locality_check(&FockModel::new(n)?, &a, &b));
            match res {
                Ok(r) => {
                    rec.push(format!("n{n}_disjoint_twisted"), "twisted-locality", p.clone(), r.twisted_residual, ms / 2.0);
                    rec.push(
                        format!("n{n}_disjoint_mismatches"),
                        "twisted-locality",
                        p,
                        r.equivalence_mismatches as f64,
                        ms / 2.0,
                    );
                }
                Err(e) => rec.error(format!("n{n}_disjoint"), "twisted-locality", &p, &e, ms),
            }
        }
        let (res, ms) = timed(|| graded_twisted_equivalence(&FockModel::new(n)?));
        match res {
            Ok(r) => {
                let p = format!("{params};pairs={}", r.pairs_checked);
                rec.push(format!("n{n}_equivalence"), "graded-twisted-equivalence", p.clone(), r.equivalence_mismatches as f64, ms / 2.0);
                rec.push(format!("n{n}_norm_gap"), "graded-twisted-equivalence", p, r.max_residual(), ms / 2.0);
            }
            Err(e) => rec.error(format!("n{n}_equivalence"), "graded-twisted-equivalence", &params, &e, ms),
        }
    }
}

fn wedge_pair() -> (Wedge, Wedge) {
    (
        Wedge::standard(4).expect("d = 4"),
        Wedge::axis(2, 4).expect("axis 2"),
    )
}

fn reflection_generators(spin: Spin) -> Vec<(String, CoverElement)> {
    let mut gens = vec![
        ("boost1(0.2)".to_string(), CoverElement::boost_lift(1, 0.2, 4)),
        ("boost2(-0.3)".to_string(), CoverElement::boost_lift(2, -0.3, 4)),
        ("rot12(2.5)".to_string(), rotation_lift((1, 2), 2.5, 4)),
        ("rot12(7)".to_string(), rotation_lift((1, 2), 7.0, 4)),
        ("translation".to_string(), CoverElement::translation(&[0.1, 0.4, -0.2, 0.3])),
    ];
    if spin == Spin::Zero {
        gens.push(("boost3(0.25)".to_string(), CoverElement::boost_lift(3, 0.25, 4)));
        gens.push(("rot23(-1.2)".to_string(), rotation_lift((2, 3), -1.2, 4)));
    }
    gens.into_iter()
        .map(|(name, g)| (name, g.expect("valid generator")))
        .collect()
}

fn identity_chain(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let (w1, w2) = wedge_pair();
    for spin in [Spin::Zero, Spin::Half] {
        for mass in [1.0, 0.5] {
            let samples = match SampleSet::generate(spin, mass, MIN_WAVEFUNCTIONS, cfg.samples, &mut *rng) {
                Ok(s) => s,
                Err(e) => {
                    rec.error("samples", "wedge-j-boost-inversion", &format!("spin={};mass={mass}", spin.label()), &e, 0.0);
                    continue;
                }
            };
            let mut identities: Vec<(String, &str, Identity)> = BOOST_GRID
                .iter()
                .map(|&t| (format!("t={t}"), "wedge-j-boost-inversion", Identity::ConjugatedOrthogonalBoost { t }))
                .collect();
            // the mass-independence rerun covers the boost grid only
            if mass == 1.0 {
                for (name, g) in reflection_generators(spin) {
                    identities.push((format!("g={name}"), "wedge-reflection-covariance", Identity::ReflectionCovariance { g }));
                }
                identities.push(("pct".into(), "pct-conjugation", Identity::Pct));
            }
            for (label, anchor, id) in identities {
                let params = format!("spin={};mass={mass};{label}", spin.label());
                let check_id = format!("{}_s{}_m{mass}_{label}", id.name(), spin.label());
                let (res, ms) = timed(|| verify_identity_chain(&id, spin, &w1, &w2, &samples, &mut *rng));
                match res {
                    Ok(r) => rec.push(
                        check_id,
                        anchor,
                        format!("{params};points={}", r.points_checked),
                        r.max_residual(),
                        ms,
                    ),
                    Err(e) => rec.error(check_id, anchor, &params, &e, ms),
                }
            }
        }
    }
}

fn spin_statistics(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let (w1, w2) = wedge_pair();
    let operator_tol = rec.tol.max(1e-10);
    let (table, table_ms) = timed(|| spin_statistics_table(&[Spin::Zero, Spin::Half]));
    let table = match table {
        Ok(t) => t,
        Err(e) => {
            rec.error("table", "rotation-2pi-statistics", "", &e, table_ms);
            return;
        }
    };
    for row in &table {
        let spin = row.spin;
        let params = format!("spin={}", spin.label());
        let samples = SampleSet::generate(spin, 1.0, MIN_WAVEFUNCTIONS, cfg.samples, &mut *rng);
        let (res, ms) = timed(|| {
            samples.and_then(|s| verify_identity_chain(&Identity::SpinStatistics, spin, &w1, &w2, &s, &mut *rng))
        });
        match res {
            Ok(r) => {
                let value = r.value.unwrap_or(0);
                rec.push(
                    format!("s{}_chain_value_vs_kappa", spin.label()),
                    "spin-statistics-chain",
                    format!("{params};value={value};kappa={}", row.kappa),
                    (value - row.kappa).abs() as f64,
                    ms / 2.0,
                );
                rec.push_tol(
                    format!("s{}_chain_operator", spin.label()),
                    "spin-statistics-chain",
                    format!("{params};points={}", r.points_checked),
                    r.max_residual(),
                    operator_tol,
                    ms / 2.0,
                );
            }
            Err(e) => rec.error(format!("s{}_chain", spin.label()), "spin-statistics-chain", &params, &e, ms),
        }
        rec.push(
            format!("s{}_rotation_vs_kappa", spin.label()),
            "rotation-2pi-statistics",
            format!(
                "{params};rotation_2pi={};kappa={};d={};index={}",
                row.rotation_2pi, row.kappa, row.statistical_dimension, row.index
            ),
            ((row.rotation_2pi - row.kappa).abs() + i64::from(!row.matches)) as f64,
            table_ms / table.len() as f64,
        );
    }
}

fn wedge_geometry(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let cones: [(&[f64], f64); 3] = [
        (&[0.2, -0.1, 0.3, 0.05], 0.9),
        (&[-1.0, 2.0, 0.5, -0.3], 2.0),
        (&[0.4, -0.2, 0.1], 0.5),
    ];
    let region_samples = 10 * cfg.samples;
    for (i, (center, radius)) in cones.iter().enumerate() {
        let params = format!("d={};center={center:?};radius={radius}", center.len());
        let (res, ms) = timed(|| {
            let o = DoubleCone::new(MinkVector::from_row_slice(center), *radius)?;
            let minus = -LorentzMatrix::identity(center.len(), center.len());
            pct_region_check(&o, &minus, region_samples, &mut *rng)
        });
        match res {
            Ok(r) => {
                let residual = if r.containment_violations == 0 {
                    r.set_identity_residual
                } else {
                    f64::INFINITY
                };
                rec.push(
                    format!("cone{i}_pct_region"),
                    "pct-region-map",
                    format!("{params};wedges={};samples={}", r.wedges, r.samples),
                    residual,
                    ms,
                );
            }
            Err(e) => rec.error(format!("cone{i}_pct_region"), "pct-region-map", &params, &e, ms),
        }
    }
    let samples = region_samples.max(1000);
    for t in CONE_PARAMETERS {
        let params = format!("t={t};samples={samples}");
        let (res, ms) = timed(|| cone_check(t, samples, &mut *rng));
        match res {
            Ok(r) => rec.push(
                format!("cone_t{t}"),
                "boost-cone-inclusion",
                format!("{params};min_margin={:.3e}", r.min_relative_margin),
                (r.outside_w1 + r.boosted_outside_w1) as f64,
                ms,
            ),
            Err(e) => rec.error(format!("cone_t{t}"), "boost-cone-inclusion", &params, &e, ms),
        }
    }
}

fn relative_gap(a: &LorentzMatrix, b: &LorentzMatrix) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

fn vector_gap(a: &MinkVector, b: &MinkVector) -> f64 {
    (a - b).amax() / b.amax().max(1.0)
}

fn covering(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let pairs = COVER_PAIRS.max(cfg.samples);
    for d in [3usize, 4] {
        let params = format!("d={d};pairs={pairs}");
        let (res, ms) = timed(|| -> Result<[f64; 4], Error> {
            let mut hom: f64 = 0.0;
            let mut alpha: f64 = 0.0;
            let mut invariant: f64 = 0.0;
            let mut involution: f64 = 0.0;
            let i1 = reflection_i1(d)?;
            for _ in 0..pairs {
                let a = ProperCoverElement::new(CoverElement::random(d, 4, &mut *rng)?, rng.gen());
                let b = ProperCoverElement::new(CoverElement::random(d, 4, &mut *rng)?, rng.gen());
                let (lab, tab) = a.compose(&b)?.covering_map()?;
                let (la, ta) = a.covering_map()?;
                let (lb, tb) = b.covering_map()?;
                hom = hom
                    .max(relative_gap(&lab, &(&la * &lb)))
                    .max(vector_gap(&tab, &(&ta + &la * &tb)));
                invariant = invariant.max(lorentz_residual(&lab) / lab.amax().powi(2).max(1.0));
                let (g, h) = (&a.g, &b.g);
                let (l1, t1) = g.compose(h)?.alpha().covering_map()?;
                let (l2, t2) = g.alpha().compose(&h.alpha())?.covering_map()?;
                alpha = alpha.max(relative_gap(&l1, &l2)).max(vector_gap(&t1, &t2));
                let (lg, tg) = g.covering_map()?;
                let (la2, ta2) = g.alpha().covering_map()?;
                alpha = alpha
                    .max(relative_gap(&la2, &(&i1 * &lg * &i1)))
                    .max(vector_gap(&ta2, &(&i1 * &tg)));
                let (lb2, _) = g.alpha().alpha().covering_map()?;
                involution = involution.max(relative_gap(&lb2, &lg));
            }
            if d == 4 {
                // α fixes the centre {±1} of SL(2,C)
                let turn = rotation_lift((1, 2), 2.0 * PI, 4)?;
                if let (CoverElement::Sl2c { a, .. }, CoverElement::Sl2c { a: b, .. }) = (&turn, turn.alpha()) {
                    let minus_one = -Sl2c::identity();
                    alpha = alpha.max((a - b).norm()).max((a - minus_one).norm());
                }
            }
            Ok([hom, alpha, involution, invariant])
        });
        match res {
            Ok([hom, alpha, involution, invariant]) => {
                let per = ms / 4.0;
                rec.push(format!("d{d}_homomorphism"), "cover-homomorphism", params.clone(), hom, per);
                rec.push(format!("d{d}_lorentz_invariant"), "cover-homomorphism", params.clone(), invariant, per);
                rec.push(format!("d{d}_alpha_products"), "cover-reflection-automorphism", params.clone(), alpha, per);
                rec.push(format!("d{d}_alpha_involution"), "cover-reflection-automorphism", params, involution, per);
            }
            Err(e) => rec.error(format!("d{d}_homomorphism"), "cover-homomorphism", &params, &e, ms),
        }
        let params = format!("d={d};pairs={pairs}");
        let (res, ms) = timed(|| -> Result<f64, Error> {
            let mut worst: f64 = 0.0;
            for _ in 0..pairs {
                let (t1, t2) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
                let lhs = rotation_lift((1, 2), t1, d)?.compose(&rotation_lift((1, 2), t2, d)?)?;
                let rhs = rotation_lift((1, 2), t1 + t2, d)?;
                let gap = match (&lhs, &rhs) {
                    (CoverElement::Sl2c { a, .. }, CoverElement::Sl2c { a: b, .. }) => (a - b).norm(),
                    _ if lhs == rhs => 0.0,
                    _ => f64::INFINITY,
                };
                worst = worst.max(gap);
            }
            // the full turn is central and non-trivial in the cover
            let full = rotation_lift((1, 2), 2.0 * PI, d)?;
            let (l, _) = full.covering_map()?;
            if full == CoverElement::identity(d)? {
                worst = f64::INFINITY;
            }
            Ok(worst.max(relative_gap(&l, &LorentzMatrix::identity(d, d))))
        });
        match res {
            Ok(r) => rec.push(format!("d{d}_rotation_angle"), "cover-rotation-angle", params, r, ms),
            Err(e) => rec.error(format!("d{d}_rotation_angle"), "cover-rotation-angle", &params, &e, ms),
        }
    }
}
