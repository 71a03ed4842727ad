use std::f64::consts::FRAC_1_SQRT_2;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entbounds_core::cloning::{clone_bound, local_clone_pipeline, rho_clone_closed_form};
use entbounds_core::deleting::{delete_bound, global_delete, local_delete_swap, schmidt_rank_nogo_check};
use entbounds_core::linalg::expm_i_hermitian;
use entbounds_core::nogo::measure_forget_channel;
use entbounds_core::variational::{optimize_clone, optimize_delete};
use entbounds_core::{ComplexMatrix, Ket, LabeledState, SchmidtPair};

const BIN: &str = env!("CARGO_BIN_EXE_entbounds");

fn grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (0.01 + (FRAC_1_SQRT_2 - 0.01) * i as f64 / (n - 1) as f64).min(FRAC_1_SQRT_2))
        .collect()
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

fn run(args: &[&str]) -> String {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .parse()
        .unwrap()
}

fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
    expm_i_hermitian(&g.hermitian_part()).unwrap()
}

struct Report {
    failures: Vec<usize>,
}

impl Report {
    fn record(&mut self, id: usize, name: &str, ok: bool, detail: String, elapsed: Duration) {
        println!(
            "[{}] {id:>2} {name}: {detail} ({:.3}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !ok {
            self.failures.push(id);
        }
    }
}

fn maximally_entangled_cloning(r: &mut Report) {
    let t = Instant::now();
    let v = clone_bound(SchmidtPair::maximally_entangled());
    let el = t.elapsed();
    let err = (v - (12.0f64 / 7.0).log2()).abs();
    r.record(
        1,
        "clone bound at 1/√2",
        err < 1e-9 && el < Duration::from_millis(100),
        format!("value={v:.12} err={err:.1e}"),
        el,
    );
}

fn crossover(r: &mut Report) {
    let t = Instant::now();
    let line = run(&["crossover"]);
    let el = t.elapsed();
    let x = field(&line, "crossover");
    r.record(
        2,
        "crossover",
        (x - 0.4282).abs() <= 0.001 && el < Duration::from_secs(1),
        format!("crossover={x:.6}"),
        el,
    );
}

fn maximally_entangled_deleting(r: &mut Report) {
    let t = Instant::now();
    let v = delete_bound(SchmidtPair::maximally_entangled());
    let el = t.elapsed();
    let err = (v - 2.0).abs();
    r.record(
        3,
        "delete bound at 1/√2",
        err < 1e-9 && el < Duration::from_millis(100),
        format!("value={v:.12} err={err:.1e}"),
        el,
    );
}

fn pipeline_matches_closed_form(r: &mut Report) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for a in grid(50) {
        let p = SchmidtPair::new(a).unwrap();
        let out = local_clone_pipeline(p).unwrap();
        worst = worst.max(out.copy1.matrix().max_abs_diff(rho_clone_closed_form(p).matrix()));
    }
    let el = t.elapsed();
    r.record(
        4,
        "pipeline vs closed form",
        worst < 1e-12 && el < Duration::from_secs(5),
        format!("max_diff={worst:.1e}"),
        el,
    );
}

fn swap_deleter(r: &mut Report) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut argmin_ok = true;
    for a in grid(50) {
        let p = SchmidtPair::new(a).unwrap();
        let b = (1.0 - a * a).sqrt();
        let out = local_delete_swap(p).unwrap();
        worst = worst.max((out.objective - (h2(a * a) - 2.0 * b.log2())).abs());
        // value of the |11⟩ product state, −log₂ b⁴, must be the minimum
        let at_11 = -4.0 * b.log2();
        argmin_ok &= (out.term_separable - at_11).abs() < 1e-10;
    }
    r.record(
        5,
        "swap deleter closed form",
        worst < 1e-10 && argmin_ok,
        format!("max_err={worst:.1e} min_at_11={argmin_ok}"),
        t.elapsed(),
    );
}

fn figure_ordering(r: &mut Report) {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    run(&["sweep", "--points", "200", "--out", path.to_str().unwrap()]);
    let root = field(&run(&["crossover"]), "crossover");
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    let dominated = rows.iter().all(|row| row[4] >= row[3]);
    let branch: Vec<bool> = rows.iter().map(|row| row[1] <= row[2]).collect();
    let switches: Vec<usize> = (1..branch.len()).filter(|&i| branch[i] != branch[i - 1]).collect();
    let at_crossover = switches.len() == 1 && {
        let i = switches[0];
        rows[i - 1][0] <= root && root <= rows[i][0]
    };
    r.record(
        6,
        "D ≥ C and single branch switch",
        rows.len() == 200 && dominated && at_crossover,
        format!("rows={} dominated={dominated} switches={}", rows.len(), switches.len()),
        t.elapsed(),
    );
}

fn schmidt_rank(r: &mut Report) {
    let t = Instant::now();
    let entangled = grid(50)
        .into_iter()
        .all(|a| {
            let c = schmidt_rank_nogo_check(SchmidtPair::new(a).unwrap()).unwrap();
            (c.rank_input, c.rank_target) == (4, 2)
        });
    let c = schmidt_rank_nogo_check(SchmidtPair::new(0.0).unwrap()).unwrap();
    let product = (c.rank_input, c.rank_target) == (1, 1);
    r.record(
        7,
        "Schmidt-rank no-go",
        entangled && product,
        format!("entangled_(4,2)={entangled} product_(1,1)={product}"),
        t.elapsed(),
    );
}

fn measure_forget(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let amps = (0..2)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let k = Ket::normalized(amps, &[2], &["S"]).unwrap();
        let out = measure_forget_channel(&k).unwrap();
        // oracle: both registers hold diag(|α₀|², |α₁|²)
        let p0 = k.amplitudes()[0].norm_sqr();
        let oracle = ComplexMatrix::diag(&[p0, 1.0 - p0]);
        worst = worst
            .max(out.system_out.matrix().max_abs_diff(out.env_out.matrix()))
            .max(out.env_out.matrix().max_abs_diff(&oracle));
    }
    r.record(
        8,
        "measure-and-forget witness",
        worst < 1e-12,
        format!("kets=200 max_diff={worst:.1e}"),
        t.elapsed(),
    );
}

fn variational(r: &mut Report) {
    let t = Instant::now();
    let mut worst_delete = f64::NEG_INFINITY;
    let mut worst_clone = f64::NEG_INFINITY;
    for a in grid(20) {
        let p = SchmidtPair::new(a).unwrap();
        let d = optimize_delete(p, 5, 7).unwrap();
        worst_delete = worst_delete.max(d.best_objective - d.reference_bound);
        let c = optimize_clone(p, 5, 7).unwrap();
        worst_clone = worst_clone.max(c.best_objective - c.reference_bound);
    }
    let p = SchmidtPair::new(0.45).unwrap();
    let deterministic = optimize_delete(p, 5, 11).unwrap() == optimize_delete(p, 5, 11).unwrap()
        && optimize_clone(p, 5, 11).unwrap() == optimize_clone(p, 5, 11).unwrap();
    r.record(
        9,
        "variational sanity",
        worst_delete <= 1e-6 && worst_clone <= 1e-6 && deterministic,
        format!(
            "max(best−ref) delete={worst_delete:.2e} clone={worst_clone:.2e} deterministic={deterministic}"
        ),
        t.elapsed(),
    );
}

fn global_deleting(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_off: f64 = 0.0;
    let mut worst_spec: f64 = 0.0;
    for _ in 0..50 {
        // oracle: a state built from a known spectrum in a random basis
        let mut p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        let rho = ComplexMatrix::diag(&p).conjugate_by(&random_unitary(4, &mut rng));
        let ab = LabeledState::new(rho.clone(), &[2, 2], &["A", "B"]).unwrap();
        let apbp = LabeledState::new(rho, &[2, 2], &["A'", "B'"]).unwrap();
        let out = global_delete(&ab, &apbp).unwrap();
        let m = out.reduce_to(&["A'", "B'"]).unwrap().matrix().clone();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst_off = worst_off.max(m[(i, j)].norm());
                }
            }
        }
        let mut got = m.diagonal_real();
        got.sort_by(f64::total_cmp);
        p.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(&p) {
            worst_spec = worst_spec.max((g - e).abs());
        }
    }
    r.record(
        10,
        "global deleting",
        worst_off < 1e-12 && worst_spec < 1e-10,
        format!("max_offdiag={worst_off:.1e} max_spectrum_err={worst_spec:.1e}"),
        t.elapsed(),
    );
}

fn main() {
    let mut r = Report { failures: Vec::new() };
    maximally_entangled_cloning(&mut r);
    crossover(&mut r);
    maximally_entangled_deleting(&mut r);
    pipeline_matches_closed_form(&mut r);
    swap_deleter(&mut r);
    figure_ordering(&mut r);
    schmidt_rank(&mut r);
    measure_forget(&mut r);
    variational(&mut r);
    global_deleting(&mut r);
    if !r.failures.is_empty() {
        eprintln!("failed criteria: {:?}", r.failures);
        std::process::exit(1);
    }
}
