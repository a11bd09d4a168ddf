#include "mia/discovery/ncc.hpp"

#include <algorithm>
#include <cmath>

#include "mia/error.hpp"

namespace mia::discovery {

double ncc(std::span<const double> x, std::span<const double> y, int lag) {
  const long nx = static_cast<long>(x.size());
  const long ny = static_cast<long>(y.size());
  const long begin = std::max(0L, -static_cast<long>(lag));
  const long end = std::min(nx, ny - lag);
  const long m = end - begin;
  if (m < 2) throw Error(Errc::InsufficientOverlap, "overlap of " + std::to_string(std::max(0L, m)) + " bins");

  double mx = 0.0, my = 0.0;
  for (long t = begin; t < end; ++t) {
    mx += x[t];
    my += y[t + lag];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (long t = begin; t < end; ++t) {
    const double dx = x[t] - mx;
    const double dy = y[t + lag] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw Error(Errc::ConstantSeries, "zero variance over the overlap");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double ncc(const flows::ChannelSeries& x, const flows::ChannelSeries& y, int lag) {
  if (x.bin_width != y.bin_width || x.start_us != y.start_us || x.counts.size() != y.counts.size()) {
    throw Error(Errc::MismatchedBinning, "series must share bin width and window");
  }
  return ncc(std::span<const double>(x.counts), std::span<const double>(y.counts), lag);
}

LagScore max_lag_ncc(std::span<const double> x, std::span<const double> y, int max_lag) {
  bool found = false;
  LagScore best;
  for (int lag = 0; lag <= max_lag; ++lag) {
    double score;
    try {
      score = ncc(x, y, lag);
    } catch (const Error& e) {
      if (e.code() == Errc::ConstantSeries || e.code() == Errc::InsufficientOverlap) continue;
      throw;
    }
    if (!found || score > best.score) {
      best = {lag, score};
      found = true;
    }
  }
  if (!found) throw Error(Errc::NoValidLag, "no lag in [0, " + std::to_string(max_lag) + "] is scorable");
  return best;
}

}  // namespace mia::discovery
