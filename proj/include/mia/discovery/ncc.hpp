#pragma once

#include <span>

#include "mia/flows/flows.hpp"

namespace mia::discovery {

/// Pearson correlation of x[t] with y[t + lag] over the indices where both
/// exist; negative lags shift the other way. Throws InsufficientOverlap for
/// fewer than two overlapping bins and ConstantSeries when either side has
/// zero variance over the overlap.
double ncc(std::span<const double> x, std::span<const double> y, int lag);

/// Same, after checking both series share bin width, start and length
/// (MismatchedBinning otherwise).
double ncc(const flows::ChannelSeries& x, const flows::ChannelSeries& y, int lag);

struct LagScore {
  int lag = 0;
  double score = 0.0;
};

/// Best lag in [0, max_lag]; the smallest lag wins ties. Lags whose overlap is
/// too short or constant are skipped; NoValidLag if none remain.
LagScore max_lag_ncc(std::span<const double> x, std::span<const double> y, int max_lag);

}  // namespace mia::discovery
