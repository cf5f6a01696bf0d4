//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmorse::molecules::builtin;
use qmorse::nu::{derive_constants, energy_equation_residual, key_polynomials, KBranch, NuInput};
use qmorse::oracle::{self, compare, Equation, MassMode, OracleConfig, TermMode};
use qmorse::pekeris::pekeris_coefficients;
use qmorse::potential::{MassModel, PotentialParams};
use qmorse::reference::{self, ENERGY_CELLS};
use qmorse::spectrum::special::SpecialCase;
use qmorse::spectrum::{
    bound_state_count, energy_constant_mass, BetaParameters, energy_pdm, energy_s_wave, Diatomic, QuantumState, SpectrumResult,
};
use qmorse::units::UnitSystem;
use qmorse::wavefunction::{beta_hypergeometric_identity, RadialWavefunction};
use qmorse::EnergyOrigin;

const MOLECULES: [&str; 4] = ["H2", "LiH", "CO", "HCl"];
const TABLE_STATES: [(u32, u32); 9] = [(0, 0), (0, 5), (0, 10), (5, 0), (5, 5), (5, 10), (7, 0), (7, 5), (7, 10)];

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

fn sys(name: &str, q: f64, delta: f64) -> Diatomic<f64> {
    Diatomic::from_molecule(&builtin(name).unwrap(), q, delta, EnergyOrigin::SeparatedAtoms).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn table_reproduction() -> Outcome {
    let mut misses = Vec::new();
    for cell in ENERGY_CELLS {
        let e = energy_constant_mass(&sys(cell.molecule, 1.0, 0.0), QuantumState::new(cell.n, cell.l))
            .unwrap()
            .energy;
        if !cell.matches(-e) {
            misses.push(format!(
                "{} ({},{}): {:.7} vs {} ({:+} units)",
                cell.molecule,
                cell.n,
                cell.l,
                -e,
                cell.printed,
                cell.deviation_in_units(-e)
            ));
        }
    }
    let mut o = Outcome::new(
        misses.is_empty(),
        format!("{}/36 cells within one unit of the last printed digit", 36 - misses.len()),
    );
    o.notes = misses;
    o
}

fn bound_counts() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let final_level = |name: &str| {
        let s = sys(name, 1.0, 0.0);
        let count = bound_state_count(&s).n_max();
        (count, energy_s_wave(&s, count).energy)
    };
    for ((name, want_n), (_, want_e)) in reference::BOUND_COUNTS.iter().zip(reference::FINAL_LEVEL_ENERGIES) {
        let (n, e) = final_level(name);
        let rel = ((e - want_e) / want_e).abs();
        let good = n == *want_n && rel < 0.01;
        ok &= good;
        notes.push(format!("{name}: n_max {n} (want {want_n}), E {e:.4e} (want {want_e:.3e}, rel {rel:.2e})"));
    }
    let (n_lih, e_lih) = final_level("LiH");
    let (n_hcl, e_hcl) = final_level("HCl");
    let mut counts = [n_lih, n_hcl];
    counts.sort_unstable();
    let mut want_counts = reference::UNASSIGNED_COUNTS;
    want_counts.sort_unstable();
    let set_ok = counts == want_counts;
    let within = |a: f64, b: f64| ((a - b) / b).abs() < 0.01;
    let [w0, w1] = reference::UNASSIGNED_FINAL_ENERGIES;
    let energies_ok = (within(e_lih, w0) && within(e_hcl, w1)) || (within(e_lih, w1) && within(e_hcl, w0));
    ok &= set_ok && energies_ok;
    notes.push(format!(
        "LiH: n_max {n_lih}, E {e_lih:.4e}; HCl: n_max {n_hcl}, E {e_hcl:.4e}; reference set {{24, 29}}, {{-1.270e-3, -1.303e-3}}"
    ));
    let mut o = Outcome::new(ok, "s-wave counts and final-level energies");
    o.notes = notes;
    o
}

fn table_oracle_config() -> OracleConfig {
    OracleConfig {
        grid_points: 4000,
        centrifugal_mode: TermMode::Pekeris,
        inverse_r_mode: TermMode::Pekeris,
        mass_mode: MassMode::Constant,
        max_levels: Some(8),
        ..OracleConfig::default()
    }
}

fn oracle_exactness() -> Outcome {
    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    let mut ok = true;
    for name in MOLECULES {
        let s = sys(name, 1.0, 0.0);
        for l in [0, 5, 10] {
            let spec = oracle::solve(&s, l, &table_oracle_config()).unwrap();
            let closed: Vec<SpectrumResult<f64>> = [0, 5, 7]
                .iter()
                .map(|&n| energy_constant_mass(&s, QuantumState::new(n, l)).unwrap())
                .collect();
            let report = compare(&closed, &spec);
            if report.matched != closed.len() || report.max_abs_dev >= 1e-5 {
                ok = false;
                notes.push(format!("{name} l={l}: matched {}, max dev {:.2e}", report.matched, report.max_abs_dev));
            }
            worst = worst.max(report.max_abs_dev);
        }
    }
    let mut o = Outcome::new(ok, format!("36 states, max |dev| {worst:.2e} eV (limit 1e-5, grids 4000/8000)"));
    o.notes = notes;
    o
}

fn pdm_suite() -> Outcome {
    let mut notes = Vec::new();

    // continuity at small delta
    let mut cont = 0.0_f64;
    for name in MOLECULES {
        let s0 = sys(name, 1.0, 0.0);
        let s1 = sys(name, 1.0, 1e-6);
        for (n, l) in TABLE_STATES {
            let a = energy_constant_mass(&s0, QuantumState::new(n, l)).unwrap().energy;
            let b = energy_pdm(&s1, QuantumState::new(n, l)).unwrap().energy;
            cont = cont.max((a - b).abs());
        }
    }
    let a_ok = cont < 1e-4;
    notes.push(format!("(a) max |E(1e-6) - E(0)| = {cont:.2e} eV"));

    // explicit formula against the eps inversion
    let mut r = rng(4);
    let mut worst = 0.0_f64;
    let mut draws = 0;
    while draws < 1000 {
        let de: f64 = r.gen_range(1.0..12.0);
        let a = r.gen_range(0.8..2.5);
        let re = r.gen_range(0.6..1.8);
        let mu = r.gen_range(0.4..8.0);
        let q = r.gen_range(0.5..2.0);
        let delta = r.gen_range(0.01..0.9);
        let l = r.gen_range(0..20);
        let n = r.gen_range(0..12);
        let p = PotentialParams::new(de, a, re, q).unwrap().with_origin(EnergyOrigin::SeparatedAtoms);
        let s = Diatomic::new(p, MassModel::new(mu, delta).unwrap(), UnitSystem::standard()).unwrap();
        let Ok(res) = energy_pdm(&s, QuantumState::new(n, l)) else { continue };
        if !res.bound {
            continue;
        }
        let identity = s.energy_from_eps(l, res.eps);
        worst = worst.max(((res.energy - identity) / res.energy).abs());
        draws += 1;
    }
    let b_ok = worst < 1e-12;
    notes.push(format!("(b) max relative gap over 1000 draws = {worst:.2e}"));

    // oracle on the reduced equation
    let mut c_ok = true;
    let mut c_worst = 0.0_f64;
    let mut states = 0;
    for name in ["H2", "LiH"] {
        for delta in [0.1, 0.3, 0.5] {
            let s = sys(name, 1.0, delta);
            for l in [0, 5] {
                let closed: Vec<SpectrumResult<f64>> = (0..)
                    .map(|n| energy_pdm(&s, QuantumState::new(n, l)))
                    .take_while(|r| r.as_ref().is_ok_and(|r| r.bound))
                    .map(Result::unwrap)
                    .collect();
                let cfg = OracleConfig {
                    equation: Equation::Reduced,
                    mass_mode: MassMode::Pdm,
                    ..OracleConfig::default()
                };
                let spec = oracle::solve(&s, l, &cfg).unwrap();
                let report = compare(&closed, &spec);
                states += closed.len();
                c_worst = c_worst.max(report.max_abs_dev);
                if report.matched != closed.len() || report.max_abs_dev >= 1e-5 {
                    c_ok = false;
                    let worst_row = report.rows.iter().max_by(|a, b| a.abs_dev.total_cmp(&b.abs_dev));
                    notes.push(format!(
                        "(c) {name} delta={delta} l={l}: matched {}/{} (oracle {}), max dev {:.2e} at n={:?}",
                        report.matched,
                        closed.len(),
                        report.oracle_levels,
                        report.max_abs_dev,
                        worst_row.map(|r| r.n)
                    ));
                }
            }
        }
    }
    notes.push(format!("(c) {states} bound states, max |dev| {c_worst:.2e} eV"));
    let mut o = Outcome::new(a_ok && b_ok && c_ok, format!("continuity {a_ok}, identity {b_ok}, oracle {c_ok}"));
    o.notes = notes;
    o
}

fn pekeris_suite() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0_f64;
    let mut shift = 0.0_f64;
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    for _ in 0..10_000 {
        let alpha: f64 = 10f64.powf(r.gen_range(-0.5..2.5));
        let c = pekeris_coefficients(alpha).unwrap();
        let inv = 1.0 / alpha;
        let rules = [
            rel(c.a0 + c.a1 + c.a2, 1.0),
            rel(c.a1 + 2.0 * c.a2, 2.0 * inv),
            rel(c.a1 + 4.0 * c.a2, 6.0 * inv * inv),
            rel(c.b0 + c.b1 + c.b2, 1.0),
            rel(c.b1 + 2.0 * c.b2, inv),
            rel(c.b1 + 4.0 * c.b2, 2.0 * inv * inv),
        ];
        worst = rules.iter().fold(worst, |m, &v| m.max(v));
        shift = shift.max(rel(c.rotational_shift_polynomial(), c.a0));
    }
    Outcome::new(
        worst < 1e-12 && shift < 1e-12,
        format!("six sum rules max rel {worst:.2e}; shift polynomial vs a0 max rel {shift:.2e} (10^4 draws)"),
    )
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn nu_suite() -> Outcome {
    let mut notes = Vec::new();

    // exact check of the Morse instantiation at rational points with rational xi
    let mut table_ok = true;
    for (delta, eps, xi, beta1) in [
        (rat(1, 2), rat(3, 2), rat(5, 2), rat(1, 1)),
        (rat(1, 3), rat(7, 4), rat(9, 2), rat(5, 2)),
        (rat(3, 4), rat(1, 5), rat(11, 3), rat(2, 7)),
    ] {
        // beta2 from xi^2 = 1 + 4 eps^2 + (4/delta)(beta1/delta - beta2)
        let one = rat(1, 1);
        let four = rat(4, 1);
        let beta2 = &beta1 / &delta - (&xi * &xi - &one - &four * &eps * &eps) * &delta / &four;
        let input = NuInput::morse(beta1.clone(), beta2.clone(), eps.clone(), delta.clone());
        let k = derive_constants(&input).unwrap();
        let two = rat(2, 1);
        let expected = [
            (k.c4.clone(), rat(0, 1)),
            (k.c5.clone(), -&delta / &two),
            (k.c6.clone(), (&delta * &delta + &four * &beta1) / &four),
            (k.c7.clone(), -beta2.clone()),
            (k.c8.clone(), &eps * &eps),
            (k.c9.clone(), &delta * &delta * &xi * &xi / &four),
            (k.c10.clone(), &two * &eps),
            (k.c11.clone(), xi.clone()),
            (k.c12.clone(), eps.clone()),
            (k.c13.clone(), (&one + &xi) / &two),
        ];
        for (i, (got, want)) in expected.iter().enumerate() {
            if got != want {
                table_ok = false;
                notes.push(format!("c{} = {got} (want {want})", i + 4));
            }
        }
        if input.c1 != one || input.c2 != delta || input.c3 != delta || input.a != beta1 || input.b != beta2 || input.c != &eps * &eps {
            table_ok = false;
        }
    }

    // quantization residual at the closed-form eps, and tau' < 0
    let mut r = rng(6);
    let mut worst = 0.0_f64;
    let mut tau_ok = true;
    let mut draws = 0;
    while draws < 1000 {
        let delta: f64 = r.gen_range(0.01..0.9);
        let beta1: f64 = r.gen_range(1.0..2000.0);
        let n = r.gen_range(0..15u32);
        let nh = n as f64 + 0.5;
        let den = beta1.sqrt() - nh * delta;
        if den <= 0.0 {
            continue;
        }
        let floor = 2.0 * nh * beta1.sqrt() - n as f64 * (n as f64 + 1.0) * delta;
        let beta2 = floor + r.gen_range(0.1..4.0 * beta1.sqrt() * 10.0);
        let eps = 0.5 * (n as f64 * (n as f64 + 1.0) * delta - 2.0 * nh * beta1.sqrt() + beta2) / den;
        let beta = BetaParameters { beta1, beta2, delta };
        if eps <= 0.0 || beta.xi(eps).is_none() || beta.branch_gap(n, eps) <= 0.0 {
            continue;
        }
        let input = NuInput::morse(beta1, beta2, eps, delta);
        let Ok(res) = energy_equation_residual(&input, n) else { continue };
        match key_polynomials(&input, KBranch::Physical) {
            Ok(kp) => tau_ok &= kp.tau_prime() < 0.0,
            Err(_) => continue,
        }
        worst = worst.max(res.abs());
        draws += 1;
    }
    notes.push(format!("residual max {worst:.2e} over 1000 draws, tau' < 0: {tau_ok}"));
    let mut o = Outcome::new(
        table_ok && worst < 1e-10 && tau_ok,
        format!("constants exact {table_ok}, residual {worst:.2e}, tau' negative {tau_ok}"),
    );
    o.notes = notes;
    o
}

fn wavefunction_suite() -> Outcome {
    let mut notes = Vec::new();
    let mut nodes_ok = true;
    let mut residual = 0.0_f64;
    for delta in [0.0, 0.3] {
        let s = sys("H2", 1.0, delta);
        for n in 0..=4 {
            let wf = RadialWavefunction::new(&s, QuantumState::new(n, 0)).unwrap();
            nodes_ok &= wf.node_count() == n as usize;
            residual = residual.max(wf.residual_max_norm(0.01, 0.99, 200));
        }
    }
    let s = sys("H2", 1.0, 0.0);
    let spec = oracle::solve(
        &s,
        0,
        &OracleConfig {
            max_levels: Some(1),
            ..OracleConfig::default()
        },
    )
    .unwrap();
    let ground = RadialWavefunction::new(&s, QuantumState::new(0, 0)).unwrap();
    let overlap = spec.overlap_with(0, |r| ground.u(r)).abs();
    let (lhs, rhs) = beta_hypergeometric_identity(2.0_f64, 1.5, -1.0, 3.0, 2.0, 0.5).unwrap();
    let identity = ((lhs - rhs) / rhs).abs();
    for n in [1, 2] {
        let wf = RadialWavefunction::new(&sys("H2", 1.0, 0.3), QuantumState::new(n, 0)).unwrap();
        let series = wf.series_normalization(400).unwrap().unwrap();
        notes.push(format!(
            "series normalization n={n}: ratio {:?}, terms {}, converged {}, divergent {}",
            series.ratio, series.terms, series.converged, series.divergent
        ));
    }
    notes.push(format!("overlap {overlap:.10}, residual {residual:.2e}, identity rel {identity:.2e}"));
    let ok = nodes_ok && residual < 1e-6 && overlap > 0.9999 && identity < 1e-8;
    let mut o = Outcome::new(
        ok,
        format!("nodes {nodes_ok}, residual {residual:.1e}, overlap {overlap:.6}, integral identity {identity:.1e}"),
    );
    o.notes = notes;
    o
}

fn special_case_suite() -> Outcome {
    let mut r = rng(8);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let de: f64 = r.gen_range(1.0..12.0);
        let a = r.gen_range(0.8..2.5);
        let re = r.gen_range(0.6..1.8);
        let mu = r.gen_range(0.4..8.0);
        let q = r.gen_range(0.5..2.0);
        let p = PotentialParams::new(de, a, re, q).unwrap().with_origin(EnergyOrigin::SeparatedAtoms);
        let s = Diatomic::new(p, MassModel::constant(mu).unwrap(), UnitSystem::standard()).unwrap();
        let case = SpecialCase::GeneralizedVibrational {
            e0: s.e0(),
            d: de,
            alpha: a * re,
            q,
        };
        let n = r.gen_range(0..10);
        let special = case.spectrum(n).unwrap().energy_re;
        let general = energy_s_wave(&s, n).energy;
        worst = worst.max(((special - general) / general).abs());
    }
    let final_zero = SpecialCase::GeneralizedVibrational {
        e0: 0.25,
        d: 16.0,
        alpha: 2.0,
        q: 0.125,
    }
    .spectrum(0)
    .unwrap()
    .energy_re
        == 0.0;
    let mut complex_ok = true;
    let mut pt2_ok = true;
    for _ in 0..20 {
        let e0 = r.gen_range(1e-3..0.1);
        let d = r.gen_range(0.5..10.0);
        let pt1 = SpecialCase::PtType1 {
            e0,
            d,
            d_hat: r.gen_range(0.1..3.0),
        };
        let n = r.gen_range(0..6);
        let res = pt1.spectrum(n).unwrap();
        complex_ok &= res.energy_im != 0.0 && !res.real;
        let omega: f64 = r.gen_range(0.5..3.0);
        let pt2 = SpecialCase::PtType2 { e0, d, omega, alpha: 1.0 };
        let res = pt2.spectrum(n).unwrap();
        let k3 = (d / e0).sqrt();
        let want = e0 * (d.sqrt() / omega * k3 / 2.0 - n as f64 - 0.5).powi(2);
        pt2_ok &= res.real && res.energy_im == 0.0 && ((res.energy_re - want) / want).abs() < 1e-12;
    }
    Outcome::new(
        worst < 1e-12 && final_zero && complex_ok && pt2_ok,
        format!("identification rel {worst:.1e}, final level zero {final_zero}, PT1 complex {complex_ok}, PT2 real {pt2_ok}"),
    )
}

fn pekeris_validity() -> Outcome {
    let s = sys("H2", 1.0, 0.0);
    let cfg = OracleConfig {
        centrifugal_mode: TermMode::Exact,
        inverse_r_mode: TermMode::Exact,
        max_levels: Some(8),
        ..OracleConfig::default()
    };
    let spec = oracle::solve(&s, 10, &cfg).unwrap();
    let closed = energy_constant_mass(&s, QuantumState::new(7, 10)).unwrap().energy;
    let exact = spec.levels[7].best();
    let dev = (exact - closed).abs();
    let mut o = Outcome::new(
        (0.03..=0.15).contains(&dev),
        format!("H2 (7,10): exact-centrifugal {:.6} vs closed form {:.6}, deviation {dev:.4} eV", -exact, -closed),
    );
    o.notes.push(format!("reference exact-centrifugal value {:.7}", reference::H2_EXACT_CENTRIFUGAL[1].2));
    o
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "closed-form energies reproduce the reference table", table_reproduction),
        (2, "bound-state counts and final levels", bound_counts),
        (3, "oracle exactness in the Pekeris-approximated problem", oracle_exactness),
        (4, "position-dependent mass continuity, identity and oracle", pdm_suite),
        (5, "Pekeris coefficient algebra", pekeris_suite),
        (6, "Nikiforov-Uvarov constants and quantization", nu_suite),
        (7, "wavefunctions", wavefunction_suite),
        (8, "special cases", special_case_suite),
        (9, "Pekeris validity against the exact centrifugal term", pekeris_validity),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = std::time::Instant::now();
        let o = run();
        println!(
            "criterion {id}: {} - {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        for note in &o.notes {
            println!("    {note}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
