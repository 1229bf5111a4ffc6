use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{ground_truth, FunctionProfile};
use crate::domain::{MeasurementSummary, Metric, MemorySize, MetricVector, METRIC_COUNT};
use crate::{seed, Error, Result};

/// Open-loop load: a fixed number of requests with exponential inter-arrival
/// times.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    /// Requests per second.
    pub request_rate: f64,
    /// Seconds.
    pub duration: f64,
}

impl WorkloadSpec {
    pub fn new(request_rate: f64, duration: f64) -> Result<Self> {
        let w = WorkloadSpec {
            request_rate,
            duration,
        };
        w.validate()?;
        Ok(w)
    }

    /// 30 requests per second for ten minutes.
    pub fn standard() -> Self {
        WorkloadSpec {
            request_rate: 30.0,
            duration: 600.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.request_rate.is_finite() && self.request_rate > 0.0) {
            return Err(Error::domain(format!("request rate must be positive, got {}", self.request_rate)));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::domain(format!("duration must be positive, got {}", self.duration)));
        }
        if self.request_count() == 0 {
            return Err(Error::domain("workload must produce at least one request"));
        }
        Ok(())
    }

    /// `floor(rate * duration)`.
    pub fn request_count(&self) -> u64 {
        (self.request_rate * self.duration).floor() as u64
    }
}

/// Lognormal factor with mean 1 and the given coefficient of variation.
#[derive(Clone, Copy)]
struct Noise {
    mu: f64,
    sigma: f64,
}

impl Noise {
    fn new(cv: f64) -> Self {
        let sigma2 = (1.0 + cv * cv).ln();
        Noise {
            mu: -0.5 * sigma2,
            sigma: sigma2.sqrt(),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let n: f64 = StandardNormal.sample(rng);
        (self.mu + self.sigma * n).exp()
    }
}

/// Unbiased integer rounding: `floor(x) + Bernoulli(frac(x))`.
fn round_counter(x: f64, rng: &mut ChaCha8Rng) -> f64 {
    let floor = x.floor();
    if rng.random::<f64>() < x - floor {
        floor + 1.0
    } else {
        floor
    }
}

const CPU_GROUP: [Metric; 3] = [Metric::ExecutionTime, Metric::UserCpuTime, Metric::SystemCpuTime];
const LAG_GROUP: [Metric; 4] = [
    Metric::MinEventLoopLag,
    Metric::MaxEventLoopLag,
    Metric::MeanEventLoopLag,
    Metric::StdEventLoopLag,
];
const MEMORY_GROUP: [Metric; 8] = [
    Metric::ResidentSet,
    Metric::MaxResidentSet,
    Metric::TotalHeap,
    Metric::HeapUsed,
    Metric::PhysicalHeap,
    Metric::AllocatedMemory,
    Metric::ExternalMemory,
    Metric::BytecodeMetadata,
];
const COUNTERS: [Metric; 6] = [
    Metric::VolContextSwitches,
    Metric::InvolContextSwitches,
    Metric::FsReads,
    Metric::FsWrites,
    Metric::PackagesReceived,
    Metric::PackagesTransmitted,
];

/// Samples per-request metric vectors around an expectation.
///
/// Noise is shared within groups so related fields stay consistent:
/// execution time and CPU times share one draw; the four event-loop lag
/// statistics share one; heap and resident-set sizes share one. Counters get
/// independent draws followed by unbiased integer rounding, and each byte
/// counter its own draw. With zero noise every request equals the expectation.
struct RequestSampler {
    expected: MetricVector,
    noise: Option<Noise>,
    rng: ChaCha8Rng,
}

impl RequestSampler {
    fn new(profile: &FunctionProfile, memory: MemorySize, expected: MetricVector) -> Self {
        let stream = seed::derive(profile.seed, &format!("metrics/{}", memory.megabytes()));
        RequestSampler {
            expected,
            noise: (profile.noise_cv > 0.0).then(|| Noise::new(profile.noise_cv)),
            rng: ChaCha8Rng::seed_from_u64(stream),
        }
    }

    fn next(&mut self) -> MetricVector {
        let Some(noise) = self.noise else {
            return self.expected;
        };
        let e = &self.expected;
        let rng = &mut self.rng;
        let mut v = *e;
        let z_cpu = noise.draw(rng);
        for m in CPU_GROUP {
            *v.get_mut(m) = e.get(m) * z_cpu;
        }
        let z_lag = noise.draw(rng);
        for m in LAG_GROUP {
            *v.get_mut(m) = e.get(m) * z_lag;
        }
        let z_mem = noise.draw(rng);
        for m in MEMORY_GROUP {
            *v.get_mut(m) = e.get(m) * z_mem;
        }
        v.available_heap = (v.heap_limit - v.total_heap).max(0.0);
        v.bytes_received = e.bytes_received * noise.draw(rng);
        v.bytes_transmitted = e.bytes_transmitted * noise.draw(rng);
        for m in COUNTERS {
            let z = noise.draw(rng);
            *v.get_mut(m) = round_counter(e.get(m) * z, rng);
        }
        v
    }
}

/// Arrival times (s) of `n` requests in `[0, duration)`.
///
/// Inter-arrival gaps are exponential; the cumulative sums of `n + 1` gaps
/// are normalized by their total, which yields the arrival times of a Poisson
/// process conditioned on `n` arrivals in the window.
fn arrival_times(profile: &FunctionProfile, memory: MemorySize, workload: &WorkloadSpec) -> Vec<f64> {
    let n = workload.request_count() as usize;
    let stream = seed::derive(profile.seed, &format!("arrivals/{}", memory.megabytes()));
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let gaps = Exp::new(workload.request_rate).expect("rate validated positive");
    let mut cumulative = Vec::with_capacity(n);
    let mut total = 0.0;
    for _ in 0..n {
        total += gaps.sample(&mut rng);
        cumulative.push(total);
    }
    total += gaps.sample(&mut rng);
    let scale = workload.duration / total;
    cumulative.iter_mut().for_each(|t| *t *= scale);
    cumulative
}

/// Running mean and sample variance (Welford).
struct Moments {
    count: u64,
    mean: [f64; METRIC_COUNT],
    m2: [f64; METRIC_COUNT],
}

impl Moments {
    fn new() -> Self {
        Moments {
            count: 0,
            mean: [0.0; METRIC_COUNT],
            m2: [0.0; METRIC_COUNT],
        }
    }

    fn push(&mut self, v: &MetricVector) {
        self.count += 1;
        let n = self.count as f64;
        for (i, x) in v.to_array().into_iter().enumerate() {
            let delta = x - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (x - self.mean[i]);
        }
    }

    fn finish(&self) -> (MetricVector, MetricVector) {
        let std = if self.count > 1 {
            let denom = (self.count - 1) as f64;
            self.m2.map(|m2| (m2.max(0.0) / denom).sqrt())
        } else {
            [0.0; METRIC_COUNT]
        };
        (MetricVector::from_array(self.mean), MetricVector::from_array(std))
    }
}

fn expected_vector(profile: &FunctionProfile, memory: MemorySize) -> Result<MetricVector> {
    Ok(*ground_truth(profile)?.expected(memory))
}

/// Run `workload` against `profile` at `memory` and aggregate the requests.
pub fn simulate_measurement(
    profile: &FunctionProfile,
    memory: MemorySize,
    workload: &WorkloadSpec,
) -> Result<MeasurementSummary> {
    workload.validate()?;
    let mut sampler = RequestSampler::new(profile, memory, expected_vector(profile, memory)?);
    let mut moments = Moments::new();
    for _ in 0..workload.request_count() {
        moments.push(&sampler.next());
    }
    let (mean, std) = moments.finish();
    Ok(MeasurementSummary {
        function_id: profile.function_id.clone(),
        memory,
        sample_count: moments.count,
        mean,
        std,
        request_rate: workload.request_rate,
        duration: workload.duration,
    })
}

/// Time-stamped per-request samples of one function at one size.
#[derive(Clone, Debug, PartialEq)]
pub struct RequestTrace {
    pub function_id: String,
    pub memory: MemorySize,
    /// Seconds covered by the trace.
    pub duration: f64,
    /// Arrival time (s) of each request, ascending.
    pub arrivals: Vec<f64>,
    pub samples: Vec<MetricVector>,
}

impl RequestTrace {
    pub fn column(&self, metric: Metric) -> Vec<f64> {
        self.samples.iter().map(|s| s.get(metric)).collect()
    }
}

/// Like [`simulate_measurement`], but keep every request. The samples are the
/// same ones `simulate_measurement` aggregates.
pub fn simulate_trace(profile: &FunctionProfile, memory: MemorySize, workload: &WorkloadSpec) -> Result<RequestTrace> {
    workload.validate()?;
    let mut sampler = RequestSampler::new(profile, memory, expected_vector(profile, memory)?);
    let arrivals = arrival_times(profile, memory, workload);
    let samples = (0..arrivals.len()).map(|_| sampler.next()).collect();
    Ok(RequestTrace {
        function_id: profile.function_id.clone(),
        memory,
        duration: workload.duration,
        arrivals,
        samples,
    })
}
