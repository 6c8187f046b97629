#include "dynsense/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dynsense/lasso.hpp"

namespace dynsense {

Eigen::MatrixXd build_differencing(std::size_t q) {
  if (q % 2 != 0) throw std::invalid_argument("differencing matrix needs an even size, got " + std::to_string(q));
  const auto n = static_cast<Eigen::Index>(q);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; i += 2) {
    w(i, i) = 1.0;
    w(i, i + 1) = -1.0;
    w(i + 1, i) = -1.0;
    w(i + 1, i + 1) = 1.0;
  }
  return w;
}

double pair_gain_difference(double sensor_radius, double sensor_angle, double emitter_radius, double emitter_angle,
                            double offset_k) {
  const PolarPosition emitter(emitter_radius, emitter_angle);
  const double near = path_loss_gain(pairwise_distance(PolarPosition(sensor_radius, sensor_angle), emitter), offset_k);
  const double far =
      path_loss_gain(pairwise_distance(PolarPosition(sensor_radius, sensor_angle + kPi), emitter), offset_k);
  return near - far;
}

double variance_of_g(double sensor_radius, double emitter_radius, double offset_k, double sensor_angle) {
  if (!(sensor_radius >= 0.0) || !(emitter_radius >= 0.0))
    throw std::invalid_argument("variance_of_g: radii must be non-negative");
  if (!(offset_k > 0.0)) throw std::invalid_argument("variance_of_g: K must be positive");
  constexpr double kAbsTol = 1e-10;
  auto integrand = [&](double theta) {
    const double g = pair_gain_difference(sensor_radius, sensor_angle, emitter_radius, theta, offset_k);
    return g * g;
  };
  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kTwoPi, 20, 1e-14, &error);
  if (!(error <= kAbsTol) || !std::isfinite(integral))
    throw std::runtime_error("variance_of_g: quadrature did not reach tolerance (error " + std::to_string(error) + ")");
  return integral / kTwoPi;
}

double variance_of_g(const CircularLayout& layout, std::size_t circle, double offset_k) {
  return variance_of_g(layout.circle_radii().at(circle), layout.emitter_radius(), offset_k);
}

namespace {

// Row metadata for a pair-structured query: circle radius, sensor angle and
// sign (+1 for the first member of a pair, -1 for the second).
struct ProcessedRows {
  std::vector<double> radius;
  std::vector<double> pair_angle;
  std::vector<double> orientation;
  std::vector<double> inv_sd;
};

ProcessedRows describe_rows(const CircularLayout& layout, const QuerySet& query, double offset_k) {
  if (!is_pair_structured(layout, query))
    throw std::invalid_argument("processed matrix needs a query made of diametric pairs");
  std::vector<double> circle_var(layout.num_circles());
  for (std::size_t c = 0; c < circle_var.size(); ++c) {
    circle_var[c] = variance_of_g(layout, c, offset_k);
    if (!(circle_var[c] > 0.0)) throw std::invalid_argument("processed matrix: degenerate circle with zero variance");
  }
  ProcessedRows rows;
  for (std::size_t i = 0; i < query.size(); i += 2) {
    const auto& first = layout.sensors()[query.indices[i]];
    const std::size_t c = layout.circle_of(query.indices[i]);
    for (double orient : {1.0, -1.0}) {
      rows.radius.push_back(first.radius());
      rows.pair_angle.push_back(first.angle());
      rows.orientation.push_back(orient);
      rows.inv_sd.push_back(1.0 / std::sqrt(circle_var[c]));
    }
  }
  return rows;
}

}  // namespace

ProcessedMatrix build_processed(const CircularLayout& layout, const QuerySet& query, double offset_k, Rng& rng) {
  const ProcessedRows rows = describe_rows(layout, query, offset_k);
  const PathLossMatrix gains = build_path_loss_matrix(layout, offset_k);
  const Eigen::MatrixXd lambda_q = gains.rows(query.indices);

  ProcessedMatrix out;
  out.differenced = build_differencing(query.size()) * lambda_q;
  out.scale.resize(static_cast<Eigen::Index>(query.size()));
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < query.size(); ++i) {
    out.scale(static_cast<Eigen::Index>(i)) = (coin(rng) ? 1.0 : -1.0) * rows.inv_sd[i];
    out.row_variance.push_back(1.0 / (rows.inv_sd[i] * rows.inv_sd[i]));
  }
  out.processed = out.scale.asDiagonal() * out.differenced;
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

// Combination of `k` out of `n` with lexicographic rank `rank`.
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (std::size_t c = next;; ++c) {
      const std::uint64_t count = binomial(n - c - 1, k - slot - 1);
      if (rank < count) {
        out.push_back(c);
        next = c + 1;
        break;
      }
      rank -= count;
    }
  }
  return out;
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double support_deviation(const Eigen::MatrixXd& normalized, const std::vector<std::size_t>& support) {
  Eigen::MatrixXd sub(normalized.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j)
    sub.col(static_cast<Eigen::Index>(j)) = normalized.col(static_cast<Eigen::Index>(support[j]));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  // Fewer rows than columns: the smallest singular value is zero.
  const double smin = sub.cols() > sub.rows() ? 0.0 : sv(sv.size() - 1);
  return std::max(smax * smax - 1.0, 1.0 - smin * smin);
}

struct RipSetup {
  Eigen::MatrixXd normalized;
  std::size_t order;
  std::uint64_t total;
};

RipSetup prepare_rip(const Eigen::MatrixXd& m, std::size_t order) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("RIP: empty matrix");
  if (order == 0) throw std::invalid_argument("RIP: order must be positive");
  const auto n = static_cast<std::size_t>(m.cols());
  const std::size_t p = std::min(order, n);
  const std::uint64_t total = binomial(n, p);
  if (total > kMaxEnumeratedSupports)
    throw std::length_error("RIP: " + std::to_string(total) + " supports exceed the enumeration limit; use sampled mode");
  return {m / std::sqrt(static_cast<double>(m.rows())), p, total};
}

RipEstimate make_estimate(const Eigen::MatrixXd& m, std::size_t order, double constant, std::uint64_t checked,
                          RipMethod method) {
  RipEstimate e;
  e.order = order;
  e.constant = std::max(constant, 0.0);
  e.method = method;
  e.rows = static_cast<std::size_t>(m.rows());
  e.cols = static_cast<std::size_t>(m.cols());
  e.supports_checked = checked;
  return e;
}

constexpr std::uint64_t kRipBlock = 512;

}  // namespace

RipEstimate estimate_rip_exhaustive_serial(const Eigen::MatrixXd& m, std::size_t order) {
  const RipSetup setup = prepare_rip(m, order);
  const auto n = static_cast<std::size_t>(m.cols());
  std::vector<std::size_t> comb(setup.order);
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  double worst = 0.0;
  do {
    worst = std::max(worst, support_deviation(setup.normalized, comb));
  } while (next_combination(comb, n));
  return make_estimate(m, order, worst, setup.total, RipMethod::Exhaustive);
}

RipEstimate estimate_rip_exhaustive(const Eigen::MatrixXd& m, std::size_t order) {
  const RipSetup setup = prepare_rip(m, order);
  const auto n = static_cast<std::size_t>(m.cols());
  const auto blocks = static_cast<std::int64_t>((setup.total + kRipBlock - 1) / kRipBlock);
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::uint64_t first = static_cast<std::uint64_t>(b) * kRipBlock;
    const std::uint64_t last = std::min(first + kRipBlock, setup.total);
    std::vector<std::size_t> comb = unrank_combination(n, setup.order, first);
    for (std::uint64_t r = first; r < last; ++r) {
      worst = std::max(worst, support_deviation(setup.normalized, comb));
      next_combination(comb, n);
    }
  }
  return make_estimate(m, order, worst, setup.total, RipMethod::Exhaustive);
}

RipEstimate estimate_rip_sampled(const Eigen::MatrixXd& m, std::size_t order, std::size_t draws, Rng& rng) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("RIP: empty matrix");
  if (order == 0) throw std::invalid_argument("RIP: order must be positive");
  const auto n = static_cast<std::size_t>(m.cols());
  const std::size_t p = std::min(order, n);
  const Eigen::MatrixXd normalized = m / std::sqrt(static_cast<double>(m.rows()));
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  double worst = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    for (std::size_t i = 0; i < p; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<std::size_t> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(p));
    worst = std::max(worst, support_deviation(normalized, support));
  }
  return make_estimate(m, order, worst, draws, RipMethod::Sampled);
}

// ---------------------------------------------------------------------------

namespace {

enum class Recovery { Exact, Wrong, SolverFailure };

struct RecoveryOutcome {
  Recovery status = Recovery::Exact;
  Eigen::VectorXd recovered;
};

RecoveryOutcome check_recovery(const LassoDesign& design, const std::vector<std::size_t>& support,
                               const std::vector<int>& signs) {
  const auto n = design.matrix().cols();
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < support.size(); ++j) truth(static_cast<Eigen::Index>(support[j])) = signs[j];
  const Eigen::VectorXd y = design.matrix() * truth;
  const double scale = (design.matrix().transpose() * y).cwiseAbs().maxCoeff();
  RecoveryOutcome out;
  if (scale == 0.0) {
    // A +-1 vector in the null space can never be recovered.
    out.status = Recovery::Wrong;
    out.recovered = Eigen::VectorXd::Zero(n);
    return out;
  }
  const double xi = 1e-6 * scale;
  LassoOptions options;
  options.tol = 1e-10;
  options.max_iter = 50000;
  options.continuation = true;
  const LassoSolution sol = solve_lasso(design, y, xi, options);
  out.recovered = sol.x;
  // Subgradient violation beyond xi means the iterate is not a minimizer.
  if (!(sol.kkt_residual <= xi)) {
    out.status = Recovery::SolverFailure;
    return out;
  }
  // Entries of order xi off the support belong to the small-xi Lasso solution
  // itself, so exactness is judged in the sup norm.
  const double err = (sol.x - truth).cwiseAbs().maxCoeff();
  out.status = err <= 1e-3 ? Recovery::Exact : Recovery::Wrong;
  return out;
}

}  // namespace

NspResult nsp_recovery_oracle(const Eigen::MatrixXd& m, std::size_t order) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("NSP oracle: empty matrix");
  const auto n = static_cast<std::size_t>(m.cols());
  if (order == 0 || order > n) throw std::invalid_argument("NSP oracle: order must lie in [1, N]");
  std::uint64_t problems = 0;
  for (std::size_t s = 1; s <= order; ++s) problems += binomial(n, s) << s;
  if (problems > kMaxEnumeratedSupports)
    throw std::length_error("NSP oracle: too many support/sign combinations to enumerate");

  const LassoDesign design(m);
  NspResult result;
  result.order = order;
  for (std::size_t s = 1; s <= order; ++s) {
    const std::uint64_t supports = binomial(n, s);
    const std::uint64_t patterns = std::uint64_t{1} << s;
    const auto jobs = static_cast<std::int64_t>(supports * patterns);
    std::vector<Recovery> status(static_cast<std::size_t>(jobs), Recovery::Exact);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t job = 0; job < jobs; ++job) {
      const auto support = unrank_combination(n, s, static_cast<std::uint64_t>(job) / patterns);
      const std::uint64_t bits = static_cast<std::uint64_t>(job) % patterns;
      std::vector<int> signs(s);
      for (std::size_t j = 0; j < s; ++j) signs[j] = (bits >> j) & 1U ? -1 : 1;
      status[static_cast<std::size_t>(job)] = check_recovery(design, support, signs).status;
    }
    result.problems_checked += static_cast<std::uint64_t>(jobs);
    const auto bad = std::find_if(status.begin(), status.end(), [](Recovery r) { return r != Recovery::Exact; });
    if (bad != status.end()) {
      const auto job = static_cast<std::uint64_t>(bad - status.begin());
      NspWitness w;
      w.support = unrank_combination(n, s, job / patterns);
      for (std::size_t j = 0; j < s; ++j) w.signs.push_back((job % patterns >> j) & 1U ? -1 : 1);
      w.recovered = check_recovery(design, w.support, w.signs).recovered;
      result.pass = false;
      result.solver_failure = *bad == Recovery::SolverFailure;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMcBlock = 1024;

struct MomentBlock {
  Eigen::VectorXd sum;
  Eigen::MatrixXd cross;
  Eigen::MatrixXd cross_sq;
  std::size_t count = 0;
};

MomentBlock isotropy_block(const ProcessedRows& rows, double emitter_radius, double offset_k, std::size_t count,
                           Rng rng) {
  const auto q = static_cast<Eigen::Index>(rows.radius.size());
  MomentBlock blk{Eigen::VectorXd::Zero(q), Eigen::MatrixXd::Zero(q, q), Eigen::MatrixXd::Zero(q, q), count};
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd a(q);
  for (std::size_t s = 0; s < count; ++s) {
    const double theta = angle(rng);
    for (Eigen::Index i = 0; i < q; i += 2) {
      const double g = pair_gain_difference(rows.radius[static_cast<std::size_t>(i)],
                                            rows.pair_angle[static_cast<std::size_t>(i)], emitter_radius, theta,
                                            offset_k);
      for (Eigen::Index r = i; r < i + 2; ++r) {
        const auto ri = static_cast<std::size_t>(r);
        a(r) = (coin(rng) ? 1.0 : -1.0) * rows.orientation[ri] * g * rows.inv_sd[ri];
      }
    }
    blk.sum += a;
    const Eigen::MatrixXd outer = a * a.transpose();
    blk.cross += outer;
    blk.cross_sq += outer.cwiseProduct(outer);
  }
  return blk;
}

IsotropyReport finish_isotropy(const std::vector<MomentBlock>& blocks, Eigen::Index q) {
  IsotropyReport rep;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(q);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(q, q);
  Eigen::MatrixXd cross_sq = Eigen::MatrixXd::Zero(q, q);
  for (const auto& b : blocks) {
    sum += b.sum;
    cross += b.cross;
    cross_sq += b.cross_sq;
    rep.samples += b.count;
  }
  const auto n = static_cast<double>(rep.samples);
  rep.mean = sum / n;
  rep.covariance = cross / n;
  const Eigen::MatrixXd second = cross_sq / n;
  rep.std_error = ((second - rep.covariance.cwiseProduct(rep.covariance)).cwiseMax(0.0) / n).cwiseSqrt();
  const Eigen::MatrixXd dev = rep.covariance - Eigen::MatrixXd::Identity(q, q);
  rep.max_deviation = dev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index k = 0; k < q; ++k) {
      const double se = rep.std_error(i, k);
      const double z = se > 0.0 ? std::abs(dev(i, k)) / se : (dev(i, k) == 0.0 ? 0.0 : 1e300);
      if (i == k)
        rep.max_z_diagonal = std::max(rep.max_z_diagonal, z);
      else
        rep.max_z_off_diagonal = std::max(rep.max_z_off_diagonal, z);
    }
  return rep;
}

std::size_t block_count(std::size_t samples) { return (samples + kMcBlock - 1) / kMcBlock; }
std::size_t block_size(std::size_t samples, std::size_t b) { return std::min(kMcBlock, samples - b * kMcBlock); }

}  // namespace

IsotropyReport certify_isotropy_serial(const CircularLayout& layout, const QuerySet& query, double offset_k,
                                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("isotropy: need at least one sample");
  const ProcessedRows rows = describe_rows(layout, query, offset_k);
  std::vector<MomentBlock> blocks;
  for (std::size_t b = 0; b < block_count(samples); ++b)
    blocks.push_back(isotropy_block(rows, layout.emitter_radius(), offset_k, block_size(samples, b),
                                    make_stream(seed, b)));
  return finish_isotropy(blocks, static_cast<Eigen::Index>(query.size()));
}

IsotropyReport certify_isotropy(const CircularLayout& layout, const QuerySet& query, double offset_k,
                                std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("isotropy: need at least one sample");
  const ProcessedRows rows = describe_rows(layout, query, offset_k);
  const auto nblocks = static_cast<std::int64_t>(block_count(samples));
  std::vector<MomentBlock> blocks(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    blocks[ub] = isotropy_block(rows, layout.emitter_radius(), offset_k, block_size(samples, ub),
                                make_stream(seed, ub));
  }
  return finish_isotropy(blocks, static_cast<Eigen::Index>(query.size()));
}

SymmetryReport certify_symmetry_exchangeability(const CircularLayout& layout, std::size_t circle, double offset_k,
                                                std::size_t samples, Rng& rng) {
  if (samples < 2) throw std::invalid_argument("symmetry: need at least two samples");
  const auto& part = layout.partition(circle);
  const PolarPosition first = layout.sensors()[part[0]];
  const PolarPosition second = layout.sensors()[part[1]];
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<double> g(samples), li(samples), lj(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const PolarPosition e(layout.emitter_radius(), angle(rng));
    li[s] = path_loss_gain(pairwise_distance(first, e), offset_k);
    lj[s] = path_loss_gain(pairwise_distance(second, e), offset_k);
    g[s] = li[s] - lj[s];
  }
  const auto n = static_cast<double>(samples);
  SymmetryReport rep;
  rep.samples = samples;
  rep.tolerance = 3.0 / std::sqrt(n);
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : g) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  rep.mean = mean;
  rep.mean_std_error = std::sqrt(m2 / n);
  rep.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;

  // sup_x |F_g(x) - F_{-g}(x)|, evaluated at every jump of either cdf.
  std::vector<double> pos = g, neg(samples);
  std::transform(g.begin(), g.end(), neg.begin(), [](double v) { return -v; });
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::size_t ip = 0, in = 0;
  double gap = 0.0;
  while (ip < samples || in < samples) {
    const double x = in >= samples || (ip < samples && pos[ip] <= neg[in]) ? pos[ip] : neg[in];
    while (ip < samples && pos[ip] <= x) ++ip;
    while (in < samples && neg[in] <= x) ++in;
    gap = std::max(gap, std::abs(static_cast<double>(ip) - static_cast<double>(in)) / n);
  }
  rep.cdf_symmetry_gap = gap;

  // Joint cdf on a 10x10 grid at the deciles of the pooled marginals.
  std::vector<double> pooled = li;
  pooled.insert(pooled.end(), lj.begin(), lj.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> grid;
  for (int d = 1; d <= 10; ++d)
    grid.push_back(pooled[std::min(pooled.size() - 1, static_cast<std::size_t>(d * pooled.size() / 10 - 1))]);
  double exch = 0.0;
  for (double x : grid)
    for (double y : grid) {
      std::size_t fxy = 0, fyx = 0;
      for (std::size_t s = 0; s < samples; ++s) {
        fxy += li[s] <= x && lj[s] <= y ? 1 : 0;
        fyx += li[s] <= y && lj[s] <= x ? 1 : 0;
      }
      exch = std::max(exch, std::abs(static_cast<double>(fxy) - static_cast<double>(fyx)) / n);
    }
  rep.exchangeability_gap = exch;
  return rep;
}

std::vector<PairVariance> certify_pair_variances(const CircularLayout& layout, double offset_k, std::size_t samples,
                                                 Rng& rng) {
  if (samples < 2) throw std::invalid_argument("pair variances: need at least two samples");
  std::vector<PairVariance> out;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::size_t c = 0; c < layout.num_circles(); ++c) {
    const double quad = variance_of_g(layout, c, offset_k);
    const auto& part = layout.partition(c);
    for (std::size_t p = 0; 2 * p < part.size(); ++p) {
      const auto& s = layout.sensors()[part[2 * p]];
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t k = 0; k < samples; ++k) {
        const double g = pair_gain_difference(s.radius(), s.angle(), layout.emitter_radius(), angle(rng), offset_k);
        sum += g * g;
        sum_sq += g * g * g * g;
      }
      const auto n = static_cast<double>(samples);
      const double mean = sum / n;
      out.push_back({c, p, mean, std::sqrt(std::max(sum_sq / n - mean * mean, 0.0) / n), quad});
    }
  }
  return out;
}

std::vector<NormConvergencePoint> certify_norm_convergence(double sensor_radius, double emitter_radius,
                                                           double offset_k, const std::vector<std::size_t>& counts,
                                                           const std::vector<double>& emitter_angles) {
  if (sensor_radius == emitter_radius)
    throw std::invalid_argument("norm convergence: sensor and emitter circles must differ");
  std::vector<NormConvergencePoint> out;
  const std::vector<double> radii{sensor_radius};
  for (std::size_t count : counts) {
    Rng unused(0);
    const CircularLayout base = CircularLayout::build(1, count, 1, emitter_radius, radii, unused);
    const QuerySet all{base.partition(0)};
    for (double theta : emitter_angles) {
      const CircularLayout layout = base.with_emitter_angles({theta});
      Rng signs(0);
      const ProcessedMatrix pm = build_processed(layout, all, offset_k, signs);
      const double norm = pm.processed.col(0).squaredNorm() / static_cast<double>(count);
      out.push_back({count, normalize_angle(theta), norm, std::abs(norm - 1.0)});
    }
  }
  return out;
}

double estimate_subgaussian_norm(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("sub-gaussian norm: no samples");
  double best = 0.0;
  for (int p = 1; p <= 10; ++p) {
    double acc = 0.0;
    for (double u : samples) acc += std::pow(std::abs(u), p);
    const double moment = std::pow(acc / static_cast<double>(samples.size()), 1.0 / p);
    best = std::max(best, moment / std::sqrt(static_cast<double>(p)));
  }
  return best;
}

namespace {
double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}
}  // namespace

IndependenceReport certify_column_independence(const CircularLayout& layout, const QuerySet& query,
                                               double offset_k, std::size_t samples, Rng& rng) {
  if (samples < 2) throw std::invalid_argument("independence: need at least two samples");
  const ProcessedRows rows = describe_rows(layout, query, offset_k);
  const std::size_t q = rows.radius.size();
  std::vector<std::vector<double>> c1(q, std::vector<double>(samples)), c2 = c1;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t s = 0; s < samples; ++s) {
    const double t1 = angle(rng);
    const double t2 = angle(rng);
    for (std::size_t i = 0; i < q; ++i) {
      const double sign = (coin(rng) ? 1.0 : -1.0) * rows.orientation[i] * rows.inv_sd[i];
      c1[i][s] = sign * pair_gain_difference(rows.radius[i], rows.pair_angle[i], layout.emitter_radius(), t1, offset_k);
      c2[i][s] = sign * pair_gain_difference(rows.radius[i], rows.pair_angle[i], layout.emitter_radius(), t2, offset_k);
    }
  }
  IndependenceReport rep;
  rep.samples = samples;
  for (std::size_t i = 0; i < q; ++i) {
    rep.max_entry_correlation = std::max(rep.max_entry_correlation, std::abs(correlation(c1[i], c2[i])));
    std::vector<double> s1(samples), s2(samples);
    for (std::size_t s = 0; s < samples; ++s) {
      s1[s] = c1[i][s] * c1[i][s];
      s2[s] = c2[i][s] * c2[i][s];
    }
    rep.max_square_correlation = std::max(rep.max_square_correlation, std::abs(correlation(s1, s2)));
  }
  return rep;
}

std::vector<double> sample_processed_entries(const CircularLayout& layout, const QuerySet& query, double offset_k,
                                             std::size_t row, std::size_t samples, Rng& rng) {
  const ProcessedRows rows = describe_rows(layout, query, offset_k);
  if (row >= rows.radius.size()) throw std::out_of_range("sample_processed_entries: row out of range");
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> out(samples);
  for (auto& v : out) {
    const double g =
        pair_gain_difference(rows.radius[row], rows.pair_angle[row], layout.emitter_radius(), angle(rng), offset_k);
    v = (coin(rng) ? 1.0 : -1.0) * rows.orientation[row] * g * rows.inv_sd[row];
  }
  return out;
}

}  // namespace dynsense
