//! Monte Carlo and grid checks of the inequalities and identities the
//! library relies on.

use rayon::prelude::*;

use super::report::{PassCondition, Tally, ViolationReport};
use super::sampling::{
    check_dim, derived_rng, qubit_with_direction, random_basis, random_basis_pair_with,
    random_direction, random_mixed_state, random_pure_state, random_qubit, random_real_vector, StreamRng,
};
use crate::bounds::{evaluate, purity_to_p, BoundKind, BoundRequest};
use crate::coherence::{coherence, coherence_relative_entropy, MeasureKind};
use crate::numlin::{
    basis_pair_geometry, hermitian_eigen, hermitian_eigenvalues, overlap, shannon_entropy, von_neumann_entropy,
    AngleTriple, BlochVector, ComplexMatrix, DensityMatrix, OrthonormalBasis, PureState, C64,
};
use crate::tightsolver::{tight_bound_1d, tight_bound_2d_crosscheck, SolverOptions};
use crate::{Error, Result};

const CHUNK: u64 = 4096;

/// Seed, per-check sample count and Hilbert-space dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: u64,
    pub dim: usize,
}

impl SampleConfig {
    pub fn new(seed: u64, samples: u64, dim: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidInput("samples must be at least 1".into()));
        }
        check_dim(dim, 2, 8)?;
        Ok(Self { seed, samples, dim })
    }

    pub fn with_dim(self, dim: usize) -> Result<Self> {
        Self::new(self.seed, self.samples, dim)
    }
}

/// Stream identifiers; each check owns one so checks can run in any order.
mod stream {
    pub const OVERLAP: u64 = 0x100;
    pub const OVERLAP_PROBE: u64 = 0x200;
    pub const SINE: u64 = 0x300;
    pub const POSITIVITY: u64 = 0x400;
    pub const PURIFICATION: u64 = 0x500;
    pub const ENTROPY_SUM: u64 = 0x600;
    pub const BOUND: u64 = 0x700;
    pub const ALL_BOUNDS: u64 = 0x780;
    pub const L1_SATURATION: u64 = 0x800;
    pub const ATTAINABILITY: u64 = 0x900;
}

/// Runs `per_chunk` over fixed-size chunks of the sample budget, each with
/// its own stream, and returns the chunk results in chunk order. The result
/// does not depend on the number of worker threads.
fn chunked<T, F>(config: &SampleConfig, check: u64, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StreamRng, u64) -> T + Sync,
{
    let chunks = config.samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = derived_rng(config.seed, check, k);
            let n = CHUNK.min(config.samples - k * CHUNK);
            per_chunk(&mut rng, n)
        })
        .collect()
}

fn merged(parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

fn tally_chunks<F>(config: &SampleConfig, check: u64, sample: F) -> Result<Tally>
where
    F: Fn(&mut StreamRng, &mut Tally) -> Result<()> + Sync,
{
    let parts = chunked(config, check, |rng, n| {
        let mut t = Tally::default();
        for _ in 0..n {
            sample(rng, &mut t)?;
        }
        Ok(t)
    });
    Ok(merged(parts.into_iter().collect::<Result<Vec<_>>>()?))
}

pub(crate) fn fmt_c64(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn fmt_state(s: &PureState) -> String {
    let parts: Vec<String> = s.amplitudes().iter().map(|&z| fmt_c64(z)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &ComplexMatrix) -> String {
    let d = m.dim();
    let rows: Vec<String> = (0..d)
        .map(|i| (0..d).map(|j| fmt_c64(m[(i, j)])).collect::<Vec<_>>().join(" "))
        .collect();
    rows.join("; ")
}

fn fmt_basis(b: &OrthonormalBasis) -> String {
    let parts: Vec<String> = b.vectors().iter().map(fmt_state).collect();
    parts.join(" ")
}

fn fmt_bloch(v: &BlochVector) -> String {
    format!("({}, {}, {})", v.x, v.y, v.z)
}

/// `a = |<r|x>|^2`, `b = |<r|z>|^2`, `c = |<x|z>|^2`.
fn overlap_triple(x: &PureState, z: &PureState, r: &PureState) -> Result<(f64, f64, f64)> {
    Ok((overlap(r, x)?, overlap(r, z)?, overlap(x, z)?))
}

/// Smallest slack of the overlap inequalities `a + b <= 1 + sqrt(c)` and
/// `|a - b| <= sqrt(1 - c)`, plus `a + b >= 1 - sqrt(c)` when
/// `include_lower` is set.
pub fn overlap_slack(a: f64, b: f64, c: f64, include_lower: bool) -> f64 {
    let sc = c.max(0.0).sqrt();
    let upper = 1.0 + sc - (a + b);
    let spread = (1.0 - c).max(0.0).sqrt() - (a - b).abs();
    let lower = if include_lower { a + b - (1.0 - sc) } else { f64::INFINITY };
    upper.min(spread).min(lower)
}

/// Overlap inequalities for random Haar triples `(x, z, r)`. The lower bound
/// on `a + b` is only checked for qubits.
pub fn check_overlap_inequalities(config: &SampleConfig) -> Result<ViolationReport> {
    let d = config.dim;
    let t = tally_chunks(config, stream::OVERLAP + d as u64, |rng, t| {
        let x = random_pure_state(d, rng);
        let z = random_pure_state(d, rng);
        let r = random_pure_state(d, rng);
        let (a, b, c) = overlap_triple(&x, &z, &r)?;
        let slack = overlap_slack(a, b, c, d == 2);
        t.record(slack, slack < -1e-12, || {
            format!("x={}\nz={}\nr={}", fmt_state(&x), fmt_state(&z), fmt_state(&r))
        });
        Ok(())
    })?;
    Ok(t.into_report(format!("overlap_inequalities_d{d}"), PassCondition::NoViolations))
}

/// Directed search for counterexamples to `a + b >= 1 - sqrt(c)` in
/// dimension three or more: `r` is drawn from the complement of
/// `span{x, z}`, giving `a = b = 0`. Passes when a counterexample is found.
pub fn probe_overlap_lower_bound(config: &SampleConfig) -> Result<ViolationReport> {
    let d = config.dim;
    if d < 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let t = tally_chunks(config, stream::OVERLAP_PROBE + d as u64, |rng, t| {
        let x = random_pure_state(d, rng);
        let z = random_pure_state(d, rng);
        let r = orthogonal_complement_state(&[&x, &z], rng)?;
        let (a, b, c) = overlap_triple(&x, &z, &r)?;
        let slack = a + b - (1.0 - c.sqrt());
        t.record(slack, slack < -1e-12, || {
            format!("x={}\nz={}\nr={}", fmt_state(&x), fmt_state(&z), fmt_state(&r))
        });
        Ok(())
    })?;
    Ok(t.into_report(format!("overlap_lower_probe_d{d}"), PassCondition::CounterexampleFound))
}

fn orthogonal_complement_state(avoid: &[&PureState], rng: &mut StreamRng) -> Result<PureState> {
    let d = avoid[0].dim();
    loop {
        let mut v = random_pure_state(d, rng).amplitudes().to_vec();
        // two Gram-Schmidt passes against an orthonormalized copy of `avoid`
        let mut frame: Vec<Vec<C64>> = Vec::new();
        for s in avoid {
            let mut u = s.amplitudes().to_vec();
            for f in &frame {
                project_out(&mut u, f);
            }
            let n = norm(&u);
            if n > 1e-9 {
                u.iter_mut().for_each(|z| *z /= n);
                frame.push(u);
            }
        }
        for _ in 0..2 {
            for f in &frame {
                project_out(&mut v, f);
            }
        }
        if norm(&v) > 1e-6 {
            return PureState::normalized(v);
        }
    }
}

fn project_out(v: &mut [C64], unit: &[C64]) {
    let coeff: C64 = unit.iter().zip(v.iter()).map(|(u, x)| u.conj() * x).sum();
    v.iter_mut().zip(unit).for_each(|(x, u)| *x -= coeff * u);
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `sin(alpha) + sin(beta) >= sin(gamma)` for the pairwise angles of random
/// real 3-vector triples.
pub fn check_sine_inequality(config: &SampleConfig) -> Result<ViolationReport> {
    let t = tally_chunks(config, stream::SINE, |rng, t| {
        let [a, b, c] = [random_real_vector(rng), random_real_vector(rng), random_real_vector(rng)];
        let dirs = [a, b, c].map(|v| BlochVector::direction(v[0], v[1], v[2]));
        let [da, db, dc] = dirs;
        let angles = AngleTriple::of_vectors(&da?, &db?, &dc?);
        let slack = angles.alpha.sin() + angles.beta.sin() - angles.gamma.sin();
        t.record(slack, slack < -1e-12, || format!("a={a:?}\nb={b:?}\nc={c:?}"));
        Ok(())
    })?;
    Ok(t.into_report("angle_sine_inequality", PassCondition::NoViolations))
}

/// Positivity of `C_RE^X + C_RE^Z` for states away from the maximally mixed
/// state (purity at least `1/d + 0.01`) and incompatible bases (`c_min` at
/// least `0.001`).
pub fn check_positivity(config: &SampleConfig) -> Result<ViolationReport> {
    let d = config.dim;
    check_dim(d, 2, 6)?;
    let floor = 1.0 / d as f64 + 0.01;
    let t = tally_chunks(config, stream::POSITIVITY + d as u64, |rng, t| {
        let rho = loop {
            let rho = random_mixed_state(d, rng);
            if rho.purity() >= floor {
                break rho;
            }
        };
        let (x, z) = loop {
            let x = random_basis(d, rng);
            let z = random_basis(d, rng);
            if basis_pair_geometry(&x, &z)?.1 >= 0.001 {
                break (x, z);
            }
        };
        let sum = coherence_relative_entropy(&rho, &x)?.value + coherence_relative_entropy(&rho, &z)?.value;
        let slack = sum - 1e-12;
        t.record(slack, slack <= 0.0, || {
            format!("rho={}\nx={}\nz={}", fmt_matrix(rho.matrix()), fmt_basis(&x), fmt_basis(&z))
        });
        Ok(())
    })?;
    Ok(t.into_report(format!("positivity_d{d}"), PassCondition::NoViolations))
}

fn spectrum_entropy(m: &ComplexMatrix) -> Result<f64> {
    let values: Vec<f64> = hermitian_eigenvalues(m)?.into_iter().map(|v| v.max(0.0)).collect();
    Ok(shannon_entropy(&values))
}

/// `H(X|B)` for the purification `sum_i sqrt(l_i) |v_i>|i>` of `rho`, after
/// measuring `basis` on the first system.
pub fn conditional_entropy_with_purification(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<f64> {
    let d = rho.dim();
    basis.check_dim(d)?;
    let mut psi = vec![C64::new(0.0, 0.0); d * d];
    for (i, pair) in hermitian_eigen(rho.matrix())?.iter().enumerate() {
        let w = pair.value.max(0.0).sqrt();
        for (a, amp) in pair.vector.amplitudes().iter().enumerate() {
            psi[a * d + i] += amp * w;
        }
    }
    let joint = ComplexMatrix::outer(&psi, &psi);
    let id = ComplexMatrix::identity(d);
    let mut measured = ComplexMatrix::zeros(d * d);
    for x in basis.vectors() {
        let p = x.projector().kron(&id);
        measured = &measured + &(&(&p * &joint) * &p);
    }
    let memory = joint.partial_trace_first(d)?;
    Ok(spectrum_entropy(&measured)? - spectrum_entropy(&memory)?)
}

/// `H(X|B)` computed from an explicit purification agrees with `C_RE` within
/// `1e-8`.
pub fn check_purification_identity(config: &SampleConfig) -> Result<ViolationReport> {
    let d = config.dim;
    check_dim(d, 2, 3)?;
    let t = tally_chunks(config, stream::PURIFICATION + d as u64, |rng, t| {
        let rho = if d == 2 { random_qubit(rng) } else { random_mixed_state(d, rng) };
        let basis = random_basis(d, rng);
        let conditional = conditional_entropy_with_purification(&rho, &basis)?;
        let direct = coherence_relative_entropy(&rho, &basis)?.value;
        let slack = -(conditional - direct).abs();
        t.record(slack, slack < -1e-8, || {
            format!("rho={}\nx={}", fmt_matrix(rho.matrix()), fmt_basis(&basis))
        });
        Ok(())
    })?;
    Ok(t.into_report(format!("purification_identity_d{d}"), PassCondition::NoViolations))
}

/// `C_RE^X + S(rho)` equals the Shannon entropy of the `X` outcomes within
/// `1e-10`.
pub fn check_entropy_sum_identity(config: &SampleConfig) -> Result<ViolationReport> {
    let d = config.dim;
    let t = tally_chunks(config, stream::ENTROPY_SUM + d as u64, |rng, t| {
        let rho = if d == 2 { random_qubit(rng) } else { random_mixed_state(d, rng) };
        let basis = random_basis(d, rng);
        let lhs = coherence_relative_entropy(&rho, &basis)?.value + von_neumann_entropy(&rho);
        let rhs = shannon_entropy(&basis.probabilities(&rho)?);
        let slack = -(lhs - rhs).abs();
        t.record(slack, slack < -1e-10, || {
            format!("rho={}\nx={}", fmt_matrix(rho.matrix()), fmt_basis(&basis))
        });
        Ok(())
    })?;
    Ok(t.into_report(format!("entropy_sum_identity_d{d}"), PassCondition::NoViolations))
}

fn measure_index(measure: MeasureKind) -> usize {
    MeasureKind::ALL.iter().position(|&m| m == measure).expect("every measure is listed")
}

/// A random qubit and two random qubit bases, with the derived `(c, P)`.
struct QubitCase {
    rho: DensityMatrix,
    x: OrthonormalBasis,
    z: OrthonormalBasis,
    c: f64,
    purity: f64,
}

impl QubitCase {
    fn draw(rng: &mut StreamRng) -> Result<Self> {
        let rho = random_qubit(rng);
        let x = random_basis(2, rng);
        let z = random_basis(2, rng);
        let c = basis_pair_geometry(&x, &z)?.0.clamp(0.5, 1.0);
        let purity = rho.purity().clamp(0.5, 1.0);
        Ok(Self { rho, x, z, c, purity })
    }

    fn sum(&self, measure: MeasureKind) -> Result<f64> {
        Ok(coherence(measure, &self.rho, &self.x)?.value + coherence(measure, &self.rho, &self.z)?.value)
    }

    fn payload(&self) -> String {
        format!(
            "c={} purity={}\nrho={}\nx={}\nz={}",
            self.c,
            self.purity,
            fmt_matrix(self.rho.matrix()),
            fmt_basis(&self.x),
            fmt_basis(&self.z)
        )
    }
}

/// Validity of an arbitrary lower bound `bound(c, P)` on the `measure`
/// coherence sum over random qubit cases, at slack `1e-9`.
pub fn check_bound_validity_with<F>(
    name: &str,
    measure: MeasureKind,
    bound: F,
    config: &SampleConfig,
) -> Result<ViolationReport>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let check = stream::BOUND + name.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)) % 0x80;
    let t = tally_chunks(config, check, |rng, t| {
        let case = QubitCase::draw(rng)?;
        let slack = case.sum(measure)? - bound(case.c, case.purity)?;
        t.record(slack, slack < -1e-9, || case.payload());
        Ok(())
    })?;
    Ok(t.into_report(format!("bound_validity_{name}"), PassCondition::NoViolations))
}

/// Validity of one analytic bound against its own coherence measure.
pub fn check_bound_validity(kind: BoundKind, config: &SampleConfig) -> Result<ViolationReport> {
    check_bound_validity_with(
        kind.tag(),
        kind.measure(),
        |c, purity| Ok(evaluate(&BoundRequest { kind, c, purity })?.raw),
        config,
    )
}

/// Validity of all seven bounds on one shared stream of qubit cases; one
/// report per bound, in [`BoundKind::ALL`] order.
pub fn check_all_bounds(config: &SampleConfig) -> Result<Vec<ViolationReport>> {
    let parts = chunked(config, stream::ALL_BOUNDS, |rng, n| -> Result<Vec<Tally>> {
        let mut tallies = vec![Tally::default(); BoundKind::ALL.len()];
        for _ in 0..n {
            let case = QubitCase::draw(rng)?;
            let sums = [case.sum(MeasureKind::ALL[0])?, case.sum(MeasureKind::ALL[1])?, case.sum(MeasureKind::ALL[2])?];
            for (kind, t) in BoundKind::ALL.iter().zip(tallies.iter_mut()) {
                let sum = sums[measure_index(kind.measure())];
                let bound = evaluate(&BoundRequest { kind: *kind, c: case.c, purity: case.purity })?.raw;
                let slack = sum - bound;
                t.record(slack, slack < -1e-9, || case.payload());
            }
        }
        Ok(tallies)
    });
    let mut totals = vec![Tally::default(); BoundKind::ALL.len()];
    for part in parts {
        for (acc, t) in totals.iter_mut().zip(part?) {
            acc.merge(t);
        }
    }
    Ok(BoundKind::ALL
        .iter()
        .zip(totals)
        .map(|(kind, t)| t.into_report(format!("bound_validity_{}", kind.tag()), PassCondition::NoViolations))
        .collect())
}

/// The state whose eigen-direction is aligned with the first vector of `X`
/// saturates the `l1` bound: for random `(c, P)` the sum matches the closed
/// form within `1e-9`.
pub fn check_l1_saturation(config: &SampleConfig) -> Result<ViolationReport> {
    use rand::Rng;
    let t = tally_chunks(config, stream::L1_SATURATION, |rng, t| {
        let c = 0.5 + 0.5 * rng.random::<f64>();
        let purity = 0.5 + 0.5 * rng.random::<f64>();
        let pair = random_basis_pair_with(c, rng)?;
        let rho = qubit_with_direction(purity_to_p(purity)?, &pair.x_dir)?;
        let sum = coherence(MeasureKind::L1, &rho, &pair.x)?.value + coherence(MeasureKind::L1, &rho, &pair.z)?.value;
        let bound = evaluate(&BoundRequest { kind: BoundKind::PurityL1, c, purity })?.raw;
        let slack = -(sum - bound).abs();
        t.record(slack, slack < -1e-9, || format!("c={c} purity={purity} sum={sum} bound={bound}"));
        Ok(())
    })?;
    Ok(t.into_report("l1_saturation", PassCondition::NoViolations))
}

/// `n` evenly spaced points covering `[start, end]`, endpoints exact.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| if i == n - 1 { end } else { start + (end - start) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Evaluates `slack_at(c, P)` over the `n x n` grid on `[1/2, 1]^2`, in
/// parallel, and tallies the results in row-major order.
fn grid_tally<F>(n: usize, tol: f64, slack_at: F) -> Result<Tally>
where
    F: Fn(f64, f64) -> Result<(f64, String)> + Sync,
{
    let axis = linspace(0.5, 1.0, n);
    let points: Vec<(f64, f64)> = axis.iter().flat_map(|&c| axis.iter().map(move |&p| (c, p))).collect();
    let results: Vec<Result<(f64, String)>> = points.par_iter().map(|&(c, p)| slack_at(c, p)).collect();
    let mut t = Tally::default();
    for r in results {
        let (slack, payload) = r?;
        t.record(slack, slack < -tol, || payload);
    }
    Ok(t)
}

/// The one-dimensional solver reproduces the `l1` closed form within `1e-9`.
pub fn check_tight_l1_exactness(n: usize) -> Result<ViolationReport> {
    let opts = SolverOptions::default();
    let t = grid_tally(n, 1e-9, |c, purity| {
        let tight = tight_bound_1d(MeasureKind::L1, c, purity, &opts)?.value;
        let closed = evaluate(&BoundRequest { kind: BoundKind::PurityL1, c, purity })?.raw;
        Ok((-(tight - closed).abs(), format!("c={c} purity={purity} tight={tight} closed={closed}")))
    })?;
    Ok(t.into_report("tight_l1_exactness", PassCondition::NoViolations))
}

/// The one-dimensional reduction agrees with the brute-force minimum over
/// the whole feasible region within `1e-6`.
pub fn check_solver_reduction(measure: MeasureKind, n: usize, crosscheck_grid: usize) -> Result<ViolationReport> {
    let opts = SolverOptions::default();
    let t = grid_tally(n, 1e-6, |c, purity| {
        let one = tight_bound_1d(measure, c, purity, &opts)?.value;
        let two = tight_bound_2d_crosscheck(measure, c, purity, crosscheck_grid)?;
        Ok((-(one - two).abs(), format!("c={c} purity={purity} reduced={one} brute_force={two}")))
    })?;
    Ok(t.into_report(format!("solver_reduction_{}", measure.tag()), PassCondition::NoViolations))
}

/// The tight value dominates every analytic bound of the same measure, at
/// slack `1e-9`.
pub fn check_tight_dominance(n: usize) -> Result<ViolationReport> {
    let opts = SolverOptions::default();
    let t = grid_tally(n, 1e-9, |c, purity| {
        let mut worst = (f64::INFINITY, String::new());
        for measure in MeasureKind::ALL {
            let tight = tight_bound_1d(measure, c, purity, &opts)?.value;
            for kind in BoundKind::ALL.iter().filter(|k| k.measure() == measure) {
                let raw = evaluate(&BoundRequest { kind: *kind, c, purity })?.raw;
                if tight - raw < worst.0 {
                    worst = (tight - raw, format!("c={c} purity={purity} {kind}={raw} tight={tight}"));
                }
            }
        }
        Ok(worst)
    })?;
    Ok(t.into_report("tight_dominance", PassCondition::NoViolations))
}

/// Monte Carlo over eigen-directions at fixed `(c, P)`. Half of the
/// directions are uniform on the sphere and half uniform on the great circle
/// through the two basis directions. Returns two reports: every sum is at
/// least the tight value (slack `1e-9`), and the smallest sum comes within
/// `5e-3` of it.
pub fn check_attainability(
    measure: MeasureKind,
    c: f64,
    purity: f64,
    config: &SampleConfig,
) -> Result<[ViolationReport; 2]> {
    use rand::Rng;
    let tight = tight_bound_1d(measure, c, purity, &SolverOptions::default())?.value;
    let p = purity_to_p(purity)?;
    let check = stream::ATTAINABILITY + measure_index(measure) as u64;
    let parts = chunked(config, check, |rng, n| -> Result<(Tally, f64, String)> {
        let mut t = Tally::default();
        let mut min = (f64::INFINITY, String::new());
        for i in 0..n {
            let pair = random_basis_pair_with(c, rng)?;
            let dir = if i % 2 == 0 {
                random_direction(rng)
            } else {
                let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                let perp = super::sampling::random_orthogonal_direction(&pair.x_dir, rng);
                // the plane of x_dir and z_dir
                let zp = BlochVector {
                    x: pair.z_dir.x - pair.z_dir.dot(&pair.x_dir) * pair.x_dir.x,
                    y: pair.z_dir.y - pair.z_dir.dot(&pair.x_dir) * pair.x_dir.y,
                    z: pair.z_dir.z - pair.z_dir.dot(&pair.x_dir) * pair.x_dir.z,
                };
                let e2 = if zp.norm() > 1e-9 { zp.scaled(1.0 / zp.norm()) } else { perp };
                let (s, co) = theta.sin_cos();
                BlochVector::direction(
                    co * pair.x_dir.x + s * e2.x,
                    co * pair.x_dir.y + s * e2.y,
                    co * pair.x_dir.z + s * e2.z,
                )?
            };
            let rho = qubit_with_direction(p, &dir)?;
            let sum = coherence(measure, &rho, &pair.x)?.value + coherence(measure, &rho, &pair.z)?.value;
            let payload = || {
                format!(
                    "direction={} x={} z={} sum={sum} tight={tight}",
                    fmt_bloch(&dir),
                    fmt_bloch(&pair.x_dir),
                    fmt_bloch(&pair.z_dir)
                )
            };
            t.record(sum - tight, sum - tight < -1e-9, payload);
            if sum < min.0 {
                min = (sum, payload());
            }
        }
        Ok((t, min.0, min.1))
    });
    let mut lower = Tally::default();
    let mut best = (f64::INFINITY, String::new());
    for part in parts {
        let (t, m, payload) = part?;
        lower.merge(t);
        if m < best.0 {
            best = (m, payload);
        }
    }
    let label = format!("{}_c{c}_p{purity}", measure.tag());
    let mut attain = Tally::default();
    let slack = tight + 5e-3 - best.0;
    attain.record(slack, slack < 0.0, || best.1.clone());
    Ok([
        lower.into_report(format!("attainability_lower_{label}"), PassCondition::NoViolations),
        attain.into_report(format!("attainability_gap_{label}"), PassCondition::NoViolations),
    ])
}
