#pragma once

#include <complex>
#include <string>
#include <vector>

namespace adelim {

/// Two-time correlation values on a lag grid. `std_errors` is empty for
/// deterministic methods and holds one combined standard error per lag for
/// Monte Carlo estimates. `warning` is set when the statistics behind the
/// values are too thin to trust.
struct CorrelationSeries {
  std::vector<double> lags;
  std::vector<std::complex<double>> values;
  std::vector<double> std_errors;
  std::string method;
  std::string warning;
};

}  // namespace adelim
