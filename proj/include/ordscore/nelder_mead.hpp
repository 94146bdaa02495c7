#pragma once

#include <functional>
#include <vector>

namespace ordscore {

struct NelderMeadOptions {
  double initial_step = 0.25;
  double spread_tolerance = 1e-9;  ///< stop when f_worst - f_best falls below
  int max_evaluations = 2000;      ///< per simplex run
  int restarts = 1;                ///< reruns from the incumbent, step halved each time
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  double start_value = 0.0;  ///< objective at the starting point
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;    ///< last run met the spread tolerance
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Downhill simplex minimisation. Non-finite objective values are treated
/// as +infinity, so such vertices are never accepted over finite ones. The
/// returned value never exceeds start_value.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options = {});

}  // namespace ordscore
