#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace iwn::numeric {

/// Neumaier compensated sum. Partial sums from different workers combine
/// with merge() without losing the compensation term.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// Composite Gauss-Legendre quadrature of f over [a, b] with `panels`
/// equal panels.
double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order = 20);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Upper-tail complement Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularized_gamma_q(double a, double x);

double chi_square_cdf(double x, double dof);
/// x such that chi_square_cdf(x, dof) = p, for p in (0, 1).
double chi_square_quantile(double p, double dof);

double normal_cdf(double z);
/// z such that normal_cdf(z) = p, for p in (0, 1).
double normal_quantile(double p);

/// Si(x) = integral_0^x sin(u)/u du.
double sine_integral(double x);

/// Number of worker threads used by ensemble reductions.
std::size_t worker_count();

/// Deterministic parallel reduction over [0, count). Work is cut into fixed
/// blocks of `block` items; each block is reduced on its own accumulator
/// and the block results are merged in block order, so the result does not
/// depend on how many threads ran.
template <typename Acc, typename Body, typename Merge>
Acc block_reduce(std::size_t count, std::size_t block, const Acc& init, Body body,
                 Merge merge) {
  if (block == 0) block = 1;
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<Acc> partial(blocks, init);
  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(count, lo + block);
    for (std::size_t i = lo; i < hi; ++i) body(partial[b], i);
  };
  const std::size_t workers = std::min(worker_count(), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      });
  }
  Acc out = init;
  for (auto& p : partial) merge(out, p);
  return out;
}

}  // namespace iwn::numeric
