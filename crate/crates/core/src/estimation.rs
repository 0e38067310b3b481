//! BLUE of the non-negligible parameters, BLUP of the deleted runs, the
//! dispersion matrix and a seeded Monte Carlo harness.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial::{parse_run, Effect, Run};
use crate::linalg::{adjugate, rational_scale, RatMatrix};
use crate::partition::{abs_det_d_from_c, inverse_via_complement, ComplementInverse, Partition};

/// Responses `Y1` observed at the kept runs, aligned with `Partition::kept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationVector {
    values: Vec<BigRational>,
}

impl ObservationVector {
    pub fn new(values: Vec<BigRational>) -> Self {
        Self { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_len(&self, p: &Partition) -> Result<()> {
        if self.len() != p.kept().len() {
            return Err(Error::LengthMismatch { expected: p.kept().len(), found: self.len() });
        }
        Ok(())
    }
}

/// Parses a decimal reading exactly: `-3`, `1.25`, `2.5e-3`, or a fraction `7/3`.
pub fn parse_exact(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Invalid(format!("not an exact number: {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, scale.unsigned_abs() as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Reads a `run,y` CSV. Rows may come in any order but must cover exactly
/// the kept runs of `p`.
pub fn read_observations_csv(text: &str, p: &Partition) -> Result<ObservationVector> {
    let k = p.spec().k();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Invalid(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "run" || &headers[1] != "y" {
        return Err(Error::Invalid(format!("expected header 'run,y', found {headers:?}")));
    }
    let mut by_run: BTreeMap<Run, BigRational> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Invalid(e.to_string()))?;
        let run = parse_run(&record[0], k)?;
        if by_run.insert(run, parse_exact(&record[1])?).is_some() {
            return Err(Error::DuplicateRun(run.to_string()));
        }
    }
    let mut values = Vec::with_capacity(p.kept().len());
    for run in p.kept() {
        values.push(by_run.remove(run).ok_or_else(|| {
            Error::Invalid(format!("no observation for kept run {run}"))
        })?);
    }
    if let Some(extra) = by_run.keys().next() {
        return Err(Error::Invalid(format!("observation for run {extra}, which is not in the design")));
    }
    Ok(ObservationVector::new(values))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimationResult {
    /// BLUE per non-negligible effect, standard order.
    pub theta1_hat: Vec<(Effect, BigRational)>,
    /// BLUP per deleted run, standard order.
    pub y2_blup: Vec<(Run, BigRational)>,
    /// `D^{-1} D^{-T}`, in units of the error variance.
    pub dispersion: RatMatrix,
    pub abs_det_c: BigInt,
    pub abs_det_d: BigInt,
}

fn complement(p: &Partition) -> Result<ComplementInverse> {
    inverse_via_complement(p)
}

/// `theta1_hat = (D - E C^{-1} V)^T Y1 / N`, plus the BLUP and dispersion.
pub fn blue(p: &Partition, y: &ObservationVector) -> Result<EstimationResult> {
    y.check_len(p)?;
    let inv = complement(p)?;
    let theta = inv.matrix.apply(y.values())?;
    let theta1_hat = p.spec().nonneg().iter().copied().zip(theta).collect();
    let y2_blup = blup_unobserved(p, y)?;
    let abs_det_c = inv.det_c.abs();
    let abs_det_d = abs_det_d_from_c(p.runs(), p.kept().len(), &abs_det_c);
    Ok(EstimationResult {
        theta1_hat,
        y2_blup,
        dispersion: dispersion_from(&inv),
        abs_det_c,
        abs_det_d,
    })
}

/// Coefficient rows of the BLUE: row `i` gives the weights on the kept-run
/// responses that produce the estimate of the `i`-th non-negligible effect.
pub fn blue_coefficients(p: &Partition) -> Result<RatMatrix> {
    Ok(complement(p)?.matrix)
}

/// `Y2_hat = -(C^{-1})^T E^T Y1`.
pub fn blup_unobserved(p: &Partition, y: &ObservationVector) -> Result<Vec<(Run, BigRational)>> {
    y.check_len(p)?;
    let (adj_c, det_c) = match adjugate(p.c()) {
        Ok(pair) => pair,
        Err(Error::Singular { .. }) => return Err(Error::Inadmissible),
        Err(e) => return Err(e),
    };
    let et_y = p.e().transpose().to_rational().apply(y.values())?;
    let scaled = adj_c.transpose().to_rational().apply(&et_y)?;
    let factor = -BigRational::new(BigInt::one(), det_c);
    Ok(p.deleted().iter().copied().zip(scaled.into_iter().map(|x| x * &factor)).collect())
}

/// `D^{-1} D^{-T} = (D - E C^{-1} V)^T (D - E C^{-1} V) / N^2`.
pub fn dispersion(p: &Partition) -> Result<RatMatrix> {
    Ok(dispersion_from(&complement(p)?))
}

fn dispersion_from(inv: &ComplementInverse) -> RatMatrix {
    let m = &inv.adjusted_scaled;
    let gram = m.transpose().matmul(m).expect("square blocks");
    let scale = &inv.det_c * BigInt::from(inv.runs);
    rational_scale(&gram, &(&scale * &scale))
}

/// D-efficiency of a design against the best attainable `|det C|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Efficiency {
    /// `|det C| / max |det C|`, exact.
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub ratio: BigRational,
    /// Number of negligible parameters `d`.
    pub order: usize,
    /// `ratio^(1/d)`; equals 1 for `d = 0`.
    pub per_parameter: f64,
}

pub fn relative_efficiency(abs_det_c: &BigInt, abs_det_c_max: &BigInt, d: usize) -> Result<Efficiency> {
    if abs_det_c_max.is_zero() {
        return Err(Error::Invalid("maximum |det C| is zero".into()));
    }
    let ratio = BigRational::new(abs_det_c.abs(), abs_det_c_max.abs());
    let per_parameter = if d == 0 {
        1.0
    } else {
        ratio.to_f64().unwrap_or(0.0).powf(1.0 / d as f64)
    };
    Ok(Efficiency { ratio, order: d, per_parameter })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub reps: usize,
    pub sigma: f64,
    pub seed: u64,
    /// Mean of `theta_hat - theta` per non-negligible effect.
    pub mean_bias: Vec<f64>,
    /// Sample covariance of the estimates, row-major `n x n`.
    pub empirical_cov: Vec<f64>,
    /// `sigma^2 D^{-1} D^{-T}`, row-major `n x n`.
    pub theoretical_cov: Vec<f64>,
}

impl SimulationSummary {
    pub fn n(&self) -> usize {
        self.mean_bias.len()
    }
}

const SIM_BLOCK: usize = 1024;

struct Moments {
    sum: Vec<f64>,
    outer: Vec<f64>,
}

/// Draws `Y1 = D theta1 + eps` with iid `N(0, sigma^2)` noise, estimates by
/// BLUE each time and summarizes bias and covariance. Replicate `r` uses its
/// own ChaCha stream, so results do not depend on thread count.
pub fn simulate(
    p: &Partition,
    theta1: &[BigRational],
    sigma: f64,
    reps: usize,
    seed: u64,
) -> Result<SimulationSummary> {
    let n = p.kept().len();
    if theta1.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: theta1.len() });
    }
    if reps == 0 {
        return Err(Error::Invalid("reps must be at least 1".into()));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Invalid(format!("sigma must be finite and non-negative, got {sigma}")));
    }
    let inv = complement(p)?;
    let coef = inv.matrix.to_f64();
    let disp = dispersion_from(&inv).to_f64();

    // BLUE is linear and D^{-1} D = I exactly, so theta_hat - theta = D^{-1} eps.
    let block_moments = |block: usize| -> Moments {
        let mut m = Moments { sum: vec![0.0; n], outer: vec![0.0; n * n] };
        let mut eps = vec![0.0; n];
        let mut dev = vec![0.0; n];
        for rep in block * SIM_BLOCK..((block + 1) * SIM_BLOCK).min(reps) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64);
            for e in eps.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *e = sigma * z;
            }
            for (i, d) in dev.iter_mut().enumerate() {
                *d = coef[i * n..(i + 1) * n].iter().zip(&eps).map(|(a, b)| a * b).sum();
            }
            for i in 0..n {
                m.sum[i] += dev[i];
                for j in 0..n {
                    m.outer[i * n + j] += dev[i] * dev[j];
                }
            }
        }
        m
    };

    let blocks = reps.div_ceil(SIM_BLOCK);
    #[cfg(feature = "parallel")]
    let partials: Vec<Moments> = {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(block_moments).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Moments> = (0..blocks).map(block_moments).collect();

    let mut sum = vec![0.0; n];
    let mut outer = vec![0.0; n * n];
    for m in &partials {
        sum.iter_mut().zip(&m.sum).for_each(|(a, b)| *a += b);
        outer.iter_mut().zip(&m.outer).for_each(|(a, b)| *a += b);
    }
    let r = reps as f64;
    let mean_bias: Vec<f64> = sum.iter().map(|s| s / r).collect();
    let mut empirical_cov = vec![0.0; n * n];
    if reps > 1 {
        for i in 0..n {
            for j in 0..n {
                empirical_cov[i * n + j] =
                    (outer[i * n + j] - r * mean_bias[i] * mean_bias[j]) / (r - 1.0);
            }
        }
    }
    let theoretical_cov = disp.iter().map(|x| sigma * sigma * x).collect();
    Ok(SimulationSummary { reps, sigma, seed, mean_bias, empirical_cov, theoretical_cov })
}
