// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cdnsim/rng.hpp"
#include "cdnsim/scenario.hpp"

namespace cdnsim {

/// One catalog entry. base_weight carries the normalized Zipf mass of the
/// content's popularity rank; the instantaneous weight comes from
/// popularity_at().
struct Content {
  std::string id;
  std::uint64_t size_bits = 0;
  double bitrate_bps = 1;
  double publish_s = 0;
  double lifetime_s = 0;
  double base_weight = 0;
  PopularityShape popularity;
  DecodeModel decode;
};

/// Builds the content catalog. Rank-k content (1-based, id order) gets
/// weight k^(-s) normalized over the catalog. The first
/// initial_alive_fraction of the catalog is alive at t=0; the rest publish
/// uniformly over the first publish_window_fraction of the horizon. Sizes
/// and lifetimes are drawn per content, in index order, from the one rng.
inline std::vector<Content> build_catalog(const ContentSpaceConfig& config,
                                          double horizon_s, Rng& rng) {
  const std::uint32_t n = config.catalog_size;
  std::vector<double> weights(n);
  double weight_sum = 0;
  for (std::uint32_t k = 0; k < n; ++k) {
    weights[k] = std::pow(static_cast<double>(k + 1), -config.zipf_exponent);
    weight_sum += weights[k];
  }

  const auto initial_cohort = static_cast<std::uint32_t>(
      std::llround(config.initial_alive_fraction * static_cast<double>(n)));
  const double publish_window = config.publish_window_fraction * horizon_s;

  std::vector<Content> catalog(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    Content& c = catalog[k];
    char buf[16];
    std::snprintf(buf, sizeof buf, "c%06u", k + 1);
    c.id = buf;
    const double raw_size = config.size_bits.sample(rng);
    c.size_bits = raw_size <= 0 ? 0 : static_cast<std::uint64_t>(std::llround(raw_size));
    c.bitrate_bps = config.bitrate_bps;
    c.lifetime_s = std::max(0.0, config.lifetime_s.sample(rng));
    c.publish_s = k < initial_cohort ? 0.0 : rng.uniform(0.0, publish_window);
    c.base_weight = weights[k] / weight_sum;
    c.popularity = config.popularity_shape;
    c.decode = config.decode;
  }
  return catalog;
}

/// Instantaneous popularity weight. Zero outside [publish, publish+lifetime);
/// inside, the configured shape applied to base_weight. The exponential shape
/// halves every half_life_s.
inline double popularity_at(const Content& c, double t) {
  const double elapsed = t - c.publish_s;
  if (elapsed < 0 || elapsed >= c.lifetime_s) return 0;
  switch (c.popularity.kind) {
    case PopularityShape::Kind::Constant:
      return c.base_weight;
    case PopularityShape::Kind::LinearDecay:
      return c.base_weight * (1.0 - elapsed / c.lifetime_s);
    case PopularityShape::Kind::ExponentialDecay:
      return c.base_weight * std::exp2(-elapsed / c.popularity.half_life_s);
  }
  return 0;
}

/// Request rate of a cluster at simulated time t (requests per second),
/// modulated by the piecewise-constant hourly profile.
inline double cluster_rate_at(const ClientCluster& cluster, double t) {
  const auto hour = static_cast<std::uint64_t>(t / 3600.0) % 24;
  return static_cast<double>(cluster.user_count) *
         cluster.request_rate_per_user_per_hr / 3600.0 *
         cluster.diurnal_profile[hour];
}

/// Next arrival of the cluster's non-homogeneous Poisson stream strictly
/// after t, sampled by thinning against the peak-hour rate. Returns +inf if
/// no arrival lands before t_end.
inline double next_arrival(const ClientCluster& cluster, double t, double t_end,
                           Rng& rng) {
  const double peak =
      *std::max_element(cluster.diurnal_profile.begin(),
                        cluster.diurnal_profile.end());
  const double rate_max = static_cast<double>(cluster.user_count) *
                          cluster.request_rate_per_user_per_hr / 3600.0 * peak;
  if (rate_max <= 0) return std::numeric_limits<double>::infinity();
  double s = t;
  while (true) {
    s += rng.exponential(rate_max);
    if (s >= t_end) return std::numeric_limits<double>::infinity();
    if (rng.uniform01() * rate_max <= cluster_rate_at(cluster, s)) return s;
  }
}

/// Draws an index proportional to popularity_at(t). Returns nullopt when no
/// content carries positive weight at t.
inline std::optional<std::size_t> pick_content(
    const std::vector<Content>& catalog, double t, Rng& rng) {
  std::vector<double> cumulative(catalog.size());
  double total = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    total += popularity_at(catalog[i], t);
    cumulative[i] = total;
  }
  if (total <= 0) return std::nullopt;
  const double u = rng.uniform01() * total;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
  if (idx >= catalog.size()) idx = catalog.size() - 1;
  return idx;
}

/// One drawn request: arrival time, targeted content (nullopt when nothing
/// was alive at the arrival instant) and the requesting user.
struct RequestDraw {
  double t = 0;
  std::optional<std::size_t> content_index;
  std::uint32_t user = 0;
};

/// Samples the cluster's next request after t: arrival by thinning, content
/// proportional to the alive popularity weights at the arrival time, user
/// uniform over the cluster. Returns nullopt when the stream produces no
/// arrival before t_end.
inline std::optional<RequestDraw> next_request(
    const ClientCluster& cluster, const std::vector<Content>& catalog, double t,
    double t_end, Rng& rng) {
  const double arrival = next_arrival(cluster, t, t_end, rng);
  if (!std::isfinite(arrival)) return std::nullopt;
  RequestDraw draw;
  draw.t = arrival;
  draw.content_index = pick_content(catalog, arrival, rng);
  draw.user = static_cast<std::uint32_t>(rng.uniform_below(cluster.user_count));
  return draw;
}

/// Per-content request-rate estimator: an exponentially weighted moving
/// average over fixed windows. Each elapsed window folds its observed count
/// into the estimate with weight alpha, so a steady stream converges to its
/// true rate and an idle content decays geometrically toward zero.
class PopularityPredictor {
 public:
  PopularityPredictor(std::size_t catalog_size, double alpha, double window_s)
      : alpha_(alpha), window_s_(window_s), states_(catalog_size) {}

  void update(std::size_t content_index, double t) {
    State& st = states_[content_index];
    fold_to(st, t);
    st.count += 1;
  }

  /// Predicted requests/hour at time t. Pure; does not advance the state.
  double score(std::size_t content_index, double t) const {
    State st = states_[content_index];
    fold_to(st, t);
    return st.rate_per_hr;
  }

 private:
  struct State {
    double window_start = 0;
    double count = 0;
    double rate_per_hr = 0;
  };

  void fold_to(State& st, double t) const {
    const double window_hr = window_s_ / 3600.0;
    while (t >= st.window_start + window_s_) {
      st.rate_per_hr =
          alpha_ * (st.count / window_hr) + (1.0 - alpha_) * st.rate_per_hr;
      st.count = 0;
      st.window_start += window_s_;
    }
  }

  double alpha_;
  double window_s_;
  std::vector<State> states_;
};

}  // namespace cdnsim
