#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "tic/errors.hpp"
#include "tic/rng.hpp"

namespace tic {

// Central-difference gradient verification. The caller supplies a scalar
// loss closure that re-evaluates the forward pass from the current contents
// of each parameter block; the checker perturbs coordinates in place,
// measures (f(x+d) - f(x-d)) / (2d), and compares against the analytic
// gradient the caller computed beforehand.
//
// Relative error uses max(|analytic|, |numeric|, 1e-8) in the denominator.

struct GradCheckBlock {
  std::string name;
  double* data = nullptr;
  std::size_t size = 0;
  const double* analytic = nullptr;
};

struct GradCheckBlockResult {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t argmax = 0;
  double analytic_at_argmax = 0.0;
  double numeric_at_argmax = 0.0;
  std::size_t coords_checked = 0;
  bool pass = false;
};

struct GradCheckReport {
  std::vector<GradCheckBlockResult> blocks;
  double tol = 0.0;
  double delta = 0.0;

  bool pass() const {
    for (const auto& b : blocks)
      if (!b.pass) return false;
    return !blocks.empty();
  }
  double max_rel_err() const {
    double m = 0.0;
    for (const auto& b : blocks) m = std::max(m, b.max_rel_err);
    return m;
  }
};

struct GradCheckOptions {
  double delta = 1e-7;
  double tol = 1e-4;
  // Blocks larger than subsample_threshold are checked on a seeded random
  // coordinate subsample of at least subsample_coords coordinates.
  std::size_t subsample_threshold = 10000;
  std::size_t subsample_coords = 200;
  std::uint64_t seed = 12345;
};

inline double gradcheck_rel_err(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
}

inline GradCheckReport gradcheck(const std::function<double()>& loss_fn,
                                 const std::vector<GradCheckBlock>& blocks,
                                 const GradCheckOptions& opt = {}) {
  check_config(opt.delta > 0.0 && opt.tol > 0.0, "gradcheck: delta and tol must be > 0");
  const double f0 = loss_fn();
  const double f0_again = loss_fn();
  if (!(f0 == f0_again))
    throw OracleError("gradcheck: loss function is not deterministic (" +
                      std::to_string(f0) + " vs " + std::to_string(f0_again) + ")");
  if (!std::isfinite(f0)) throw OracleError("gradcheck: loss is not finite");

  Rng rng(opt.seed);
  GradCheckReport report;
  report.tol = opt.tol;
  report.delta = opt.delta;

  for (const auto& blk : blocks) {
    check_config(blk.data != nullptr && blk.analytic != nullptr && blk.size > 0,
                 "gradcheck: block '" + blk.name + "' is empty");
    std::vector<std::size_t> coords;
    if (blk.size <= opt.subsample_threshold) {
      coords.resize(blk.size);
      std::iota(coords.begin(), coords.end(), std::size_t(0));
    } else {
      const std::size_t want = std::max<std::size_t>(opt.subsample_coords, 200);
      std::vector<std::uint8_t> taken(blk.size, 0);
      while (coords.size() < want) {
        std::size_t i = std::size_t(rng.next_u64() % blk.size);
        if (!taken[i]) {
          taken[i] = 1;
          coords.push_back(i);
        }
      }
      std::sort(coords.begin(), coords.end());
    }

    GradCheckBlockResult res;
    res.name = blk.name;
    res.coords_checked = coords.size();
    for (std::size_t i : coords) {
      const double orig = blk.data[i];
      blk.data[i] = orig + opt.delta;
      const double fp = loss_fn();
      blk.data[i] = orig - opt.delta;
      const double fm = loss_fn();
      blk.data[i] = orig;
      const double numeric = (fp - fm) / (2.0 * opt.delta);
      const double analytic = blk.analytic[i];
      const double rel = gradcheck_rel_err(analytic, numeric);
      if (rel >= res.max_rel_err) {
        res.max_rel_err = rel;
        res.argmax = i;
        res.analytic_at_argmax = analytic;
        res.numeric_at_argmax = numeric;
      }
    }
    res.pass = res.max_rel_err < opt.tol;
    report.blocks.push_back(std::move(res));
  }
  return report;
}

}  // namespace tic
