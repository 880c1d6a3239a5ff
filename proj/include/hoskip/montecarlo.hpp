#pragma once

// Monte Carlo oracle: PPP deployments with Rayleigh fading, evaluated
// replication by replication with a counter-based generator so that results
// do not depend on the number of worker threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "hoskip/model.hpp"

namespace hoskip {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Random stream for one replication: key = seed, counter = (block, stream, replication).
class ReplicationRng {
 public:
  using result_type = std::uint32_t;

  ReplicationRng(std::uint64_t seed, std::uint64_t replication, std::uint32_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Unit-mean exponential (Rayleigh fading power gain).
  double exponential() { return -std::log(uniform()); }
  std::uint64_t poisson(double mean);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

struct McConfig {
  std::uint64_t replications = 10000;
  std::uint64_t seed = 0;
  double window_radius_factor = 8.0;  // window radius = u_max + factor / sqrt(lambda pi)
  double segment_step = 1e-3;         // km, crossing-count resolution
  bool tail_correction = true;        // add the mean interference from beyond the window
  unsigned threads = 0;               // 0: HOSKIP_THREADS, else hardware concurrency
};

void validate(const McConfig& mc);

/// Worker count for `mc`, resolving 0 through the environment.
unsigned resolve_threads(const McConfig& mc);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci99_low = 0.0;
  double ci99_high = 0.0;
  std::uint64_t n = 0;

  bool contains(double value) const { return value >= ci99_low && value <= ci99_high; }
};

inline constexpr double kZ99 = 2.5758293035489004;

/// 99% Wilson score interval for a success fraction over n trials. Unlike the
/// symmetric interval it stays nondegenerate when every trial succeeds or fails.
Estimate wilson_interval99(double fraction, std::uint64_t n);

/// Streaming mean/variance (Welford) with a deterministic pairwise merge.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  Estimate estimate() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Deployment {
  std::vector<Point> points;
  double window_radius = 0.0;

  /// Index of the point nearest to p; points must be nonempty.
  std::size_t nearest(const Point& p) const;
};

Deployment sample_ppp(double lambda, double radius, ReplicationRng& rng);

/// Mean interference from a PPP outside the disk of radius `radius` around the
/// origin, at a receiver offset u from the origin (second order in u / radius).
double mean_tail_interference(double lambda, double beta, double radius, double u);

/// Runs `replications` independent draws of `sample` and aggregates them.
/// `sample(rep)` must derive all randomness from ReplicationRng(seed, rep).
Estimate run_replications(const McConfig& mc, const std::function<double(std::uint64_t)>& sample);

/// log(1 + SINR) at (u, 0) while served by the BS nearest the origin.
Estimate sample_xi2(double u, const NetworkParams& net, const McConfig& mc);

/// Boundary crossings along a length-l segment, counted as changes of the nearest
/// BS at `segment_step` resolution.
Estimate estimate_n1(double l, double lambda, const McConfig& mc);

/// Indicator that the segment's end point is served by another BS than its start.
Estimate estimate_n2(double l, double lambda, const McConfig& mc);

/// One movement period simulated end to end: (sum of per-slot rates - C * handover) / s.
Estimate estimate_q2(const SpeedLaw& law, const SkippingPolicy& policy, const NetworkParams& net,
                     const McConfig& mc);

}  // namespace hoskip
