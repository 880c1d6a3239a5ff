#include "hoskip/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace hoskip {

using std::numbers::pi;

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

ReplicationRng::ReplicationRng(std::uint64_t seed, std::uint64_t replication, std::uint32_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, stream, static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(replication >> 32)} {}

void ReplicationRng::refill() {
  buffer_ = philox4x32(counter_, key_);
  ++counter_[0];
  next_ = 0;
}

ReplicationRng::result_type ReplicationRng::operator()() {
  if (next_ == 4) refill();
  return buffer_[next_++];
}

double ReplicationRng::uniform() {
  const std::uint64_t a = (*this)() >> 5;
  const std::uint64_t b = (*this)() >> 6;
  return (static_cast<double>((a << 26) | b) + 0.5) * 0x1.0p-53;
}

std::uint64_t ReplicationRng::poisson(double mean) {
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(*this);
}

void validate(const McConfig& mc) {
  if (mc.replications < 1) throw ValidationError("replications", "must be >= 1");
  if (!(mc.window_radius_factor >= 4.0)) throw ValidationError("window_radius_factor", "must be >= 4");
  if (!(mc.segment_step > 0.0)) throw ValidationError("segment_step", "must be > 0");
}

unsigned resolve_threads(const McConfig& mc) {
  if (mc.threads > 0) return mc.threads;
  if (const char* env = std::getenv("HOSKIP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void Accumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

Estimate Accumulator::estimate() const {
  Estimate e;
  e.n = n_;
  e.mean = mean_;
  e.std_error = n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  e.ci99_low = e.mean - kZ99 * e.std_error;
  e.ci99_high = e.mean + kZ99 * e.std_error;
  return e;
}

Estimate wilson_interval99(double fraction, std::uint64_t n) {
  if (n == 0) throw ValidationError("n", "must be >= 1");
  const double nn = static_cast<double>(n);
  const double z2 = kZ99 * kZ99;
  const double centre = (fraction + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = kZ99 / (1.0 + z2 / nn) * std::sqrt(fraction * (1.0 - fraction) / nn + z2 / (4.0 * nn * nn));
  Estimate e;
  e.mean = fraction;
  e.n = n;
  e.std_error = std::sqrt(fraction * (1.0 - fraction) / nn);
  e.ci99_low = std::max(0.0, centre - half);
  e.ci99_high = std::min(1.0, centre + half);
  return e;
}

std::size_t Deployment::nearest(const Point& p) const {
  std::size_t best = 0;
  double best_d = squared_distance(points[0], p);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = squared_distance(points[i], p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Deployment sample_ppp(double lambda, double radius, ReplicationRng& rng) {
  if (!(lambda > 0.0)) throw ValidationError("lambda", "must be > 0");
  if (!(radius > 0.0)) throw ValidationError("radius", "must be > 0");
  Deployment d;
  d.window_radius = radius;
  const std::uint64_t count = rng.poisson(lambda * pi * radius * radius);
  d.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double rho = radius * std::sqrt(rng.uniform());
    const double angle = 2.0 * pi * rng.uniform();
    d.points.push_back({rho * std::cos(angle), rho * std::sin(angle)});
  }
  return d;
}

double mean_tail_interference(double lambda, double beta, double radius, double u) {
  return 2.0 * pi * lambda *
         (std::pow(radius, 2.0 - beta) / (beta - 2.0) + 0.25 * beta * u * u * std::pow(radius, -beta));
}

Estimate run_replications(const McConfig& mc, const std::function<double(std::uint64_t)>& sample) {
  validate(mc);
  // Fixed chunking keeps the merge order, and so the result, independent of the worker count.
  constexpr std::uint64_t kChunk = 2048;
  const std::uint64_t chunks = (mc.replications + kChunk - 1) / kChunk;
  std::vector<Accumulator> parts(chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t end = std::min(mc.replications, (c + 1) * kChunk);
      for (std::uint64_t rep = c * kChunk; rep < end; ++rep) parts[c].add(sample(rep));
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(mc), chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  Accumulator total;
  for (const auto& p : parts) total.merge(p);
  return total.estimate();
}

namespace {

double window_radius(double u_max, double lambda, const McConfig& mc) {
  return u_max + mc.window_radius_factor / std::sqrt(lambda * pi);
}

// Redraws until the window holds at least one BS.
Deployment nonempty_ppp(double lambda, double radius, ReplicationRng& rng) {
  for (;;) {
    Deployment d = sample_ppp(lambda, radius, rng);
    if (!d.points.empty()) return d;
  }
}

// log(1 + SINR) at `ue` served by points[serving], with fresh fading for every BS.
double slot_rate(const Deployment& d, std::size_t serving, const Point& ue, double u, const NetworkParams& net,
                 const McConfig& mc, ReplicationRng& rng) {
  const double half_beta = 0.5 * net.beta;
  double signal = 0.0;
  double interference = mc.tail_correction ? mean_tail_interference(net.lambda, net.beta, d.window_radius, u) : 0.0;
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    const double power = rng.exponential() * std::pow(squared_distance(d.points[i], ue), -half_beta);
    if (i == serving)
      signal = power;
    else
      interference += power;
  }
  return std::log1p(signal / (net.sigma2 + interference));
}

}  // namespace

Estimate sample_xi2(double u, const NetworkParams& net, const McConfig& mc) {
  validate(net);
  if (!(u >= 0.0)) throw ValidationError("u", "must be >= 0");
  const double radius = window_radius(u, net.lambda, mc);
  return run_replications(mc, [&](std::uint64_t rep) {
    ReplicationRng rng(mc.seed, rep);
    const Deployment d = nonempty_ppp(net.lambda, radius, rng);
    const std::size_t serving = d.nearest({0.0, 0.0});
    return slot_rate(d, serving, {u, 0.0}, u, net, mc, rng);
  });
}

Estimate estimate_n1(double l, double lambda, const McConfig& mc) {
  if (!(l >= 0.0)) throw ValidationError("l", "must be >= 0");
  if (!(lambda > 0.0)) throw ValidationError("lambda", "must be > 0");
  validate(mc);
  if (l == 0.0) return Estimate{0.0, 0.0, 0.0, 0.0, mc.replications};
  const double radius = window_radius(l, lambda, mc);
  const auto steps = static_cast<std::uint64_t>(std::ceil(l / mc.segment_step));
  return run_replications(mc, [&](std::uint64_t rep) {
    ReplicationRng rng(mc.seed, rep);
    const Deployment d = nonempty_ppp(lambda, radius, rng);
    const std::size_t start = d.nearest({0.0, 0.0});
    // Every nearest point along the segment lies within d0 + 2l of the origin.
    const double d0 = std::sqrt(squared_distance(d.points[start], {0.0, 0.0}));
    const double reach = (d0 + 2.0 * l) * (d0 + 2.0 * l);
    std::vector<Point> candidates;
    for (const Point& p : d.points)
      if (p.x * p.x + p.y * p.y <= reach) candidates.push_back(p);
    Deployment near{std::move(candidates), d.window_radius};
    std::size_t current = near.nearest({0.0, 0.0});
    int changes = 0;
    for (std::uint64_t k = 1; k <= steps; ++k) {
      const double x = l * static_cast<double>(k) / static_cast<double>(steps);
      const std::size_t idx = near.nearest({x, 0.0});
      if (idx != current) {
        ++changes;
        current = idx;
      }
    }
    return static_cast<double>(changes);
  });
}

Estimate estimate_n2(double l, double lambda, const McConfig& mc) {
  if (!(l >= 0.0)) throw ValidationError("l", "must be >= 0");
  if (!(lambda > 0.0)) throw ValidationError("lambda", "must be > 0");
  validate(mc);
  if (l == 0.0) return Estimate{0.0, 0.0, 0.0, 0.0, mc.replications};
  const double radius = window_radius(l, lambda, mc);
  return run_replications(mc, [&](std::uint64_t rep) {
    ReplicationRng rng(mc.seed, rep);
    const Deployment d = nonempty_ppp(lambda, radius, rng);
    return d.nearest({0.0, 0.0}) != d.nearest({l, 0.0}) ? 1.0 : 0.0;
  });
}

Estimate estimate_q2(const SpeedLaw& law, const SkippingPolicy& policy, const NetworkParams& net,
                     const McConfig& mc) {
  validate(law);
  validate(policy);
  validate(net);
  const double s_round = std::round(policy.s);
  if (std::abs(policy.s - s_round) > 1e-9 || s_round < 1.0)
    throw ValidationError("s", "simulation needs an integer skipping time >= 1");
  const int slots = static_cast<int>(s_round);
  return run_replications(mc, [&](std::uint64_t rep) {
    ReplicationRng rng(mc.seed, rep);
    const double length = sample_displacement(law, [&] { return rng.uniform(); });
    const double heading = 2.0 * pi * rng.uniform();
    const double cx = std::cos(heading);
    const double cy = std::sin(heading);
    const Deployment d = nonempty_ppp(net.lambda, window_radius(length, net.lambda, mc), rng);
    const std::size_t serving = d.nearest({0.0, 0.0});
    double data = 0.0;
    for (int t = 0; t < slots; ++t) {
      const double u = length * t / slots;
      data += slot_rate(d, serving, {u * cx, u * cy}, u, net, mc, rng);
    }
    const bool handover = d.nearest({length * cx, length * cy}) != serving;
    return (data - (handover ? policy.cost : 0.0)) / slots;
  });
}

}  // namespace hoskip
