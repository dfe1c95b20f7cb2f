// Copyright 2026 The GeoInfer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "geoinfer/movement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "geoinfer/classifiers.hpp"
#include "geoinfer/error.hpp"

namespace geoinfer {
namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double haversine_miles(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = radians(b.lat - a.lat);
  const double dlon = radians(b.lon - a.lon);
  const double s = std::sin(dlat / 2);
  const double t = std::sin(dlon / 2);
  double h = s * s + std::cos(radians(a.lat)) * std::cos(radians(b.lat)) * t * t;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

std::string_view to_string(DistanceBucket bucket) {
  switch (bucket) {
    case DistanceBucket::k0To10: return "0-10";
    case DistanceBucket::k11To100: return "11-100";
    case DistanceBucket::k101To500: return "101-500";
    case DistanceBucket::kOver500: return "500+";
  }
  return "?";
}

DistanceBucket bucket_for(double miles) {
  if (miles <= 10.0) return DistanceBucket::k0To10;
  if (miles <= 100.0) return DistanceBucket::k11To100;
  if (miles <= 500.0) return DistanceBucket::k101To500;
  return DistanceBucket::kOver500;
}

MovementStats movement_stats(std::string_view user_id,
                             std::span<const GeoPoint> geotags) {
  MovementStats s;
  s.user_id = std::string(user_id);
  s.n_geotagged = geotags.size();
  if (geotags.size() >= 2) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < geotags.size(); ++i) {
      for (std::size_t j = i + 1; j < geotags.size(); ++j) {
        const double d = haversine_miles(geotags[i], geotags[j]);
        sum += d;
        s.max_pairwise_miles = std::max(s.max_pairwise_miles, d);
        ++pairs;
      }
    }
    s.avg_pairwise_miles = std::min(sum / static_cast<double>(pairs),
                                    s.max_pairwise_miles);
  }
  s.bucket_avg = bucket_for(s.avg_pairwise_miles);
  s.bucket_max = bucket_for(s.max_pairwise_miles);
  return s;
}

MovementStats movement_stats(const UserRecord& user) {
  std::vector<GeoPoint> geotags;
  for (const Message& m : user.messages) {
    if (m.geotag) geotags.push_back(*m.geotag);
  }
  return movement_stats(user.user_id, geotags);
}

bool label_traveling(const MovementStats& stats, double threshold_miles) {
  return stats.max_pairwise_miles > threshold_miles;
}

void write_movement_report(std::ostream& out,
                           std::span<const MovementStats> rows) {
  out << "user_id\tn_geotagged\tavg_miles\tmax_miles\tbucket_avg\tbucket_max\n";
  char buf[64];
  for (const MovementStats& r : rows) {
    out << r.user_id << '\t' << r.n_geotagged << '\t';
    std::snprintf(buf, sizeof(buf), "%.3f\t%.3f", r.avg_pairwise_miles,
                  r.max_pairwise_miles);
    out << buf << '\t' << to_string(r.bucket_avg) << '\t'
        << to_string(r.bucket_max) << '\n';
  }
}

std::array<double, kTimeSpreadSlots> time_spread(
    std::span<const Timestamp> times) {
  std::map<std::int64_t, std::array<double, kTimeSpreadSlots>> per_day;
  for (Timestamp t : times) {
    auto& day = per_day[day_number(t)];
    day[static_cast<std::size_t>(minute_of_day(t) / 60)] += 1.0;
  }
  std::array<double, kTimeSpreadSlots> out{};
  if (per_day.empty()) return out;
  for (auto& [d, counts] : per_day) {
    double total = 0.0;
    for (double c : counts) total += c;
    for (double& c : counts) c /= total;
  }
  const double n = static_cast<double>(per_day.size());
  for (std::size_t h = 0; h < kTimeSpreadSlots; ++h) {
    double mean = 0.0;
    for (const auto& [d, shares] : per_day) mean += shares[h];
    mean /= n;
    double var = 0.0;
    for (const auto& [d, shares] : per_day) {
      var += (shares[h] - mean) * (shares[h] - mean);
    }
    out[h] = std::sqrt(var / n);
  }
  return out;
}

std::vector<double> TravelModel::features(const UserProfile& user) const {
  std::vector<double> x(vocabulary.size() + kTimeSpreadSlots, 0.0);
  const TermBag bag = namespaced_union(user);
  double total = 0.0;
  for (const auto& [term, n] : bag) total += n;
  if (total > 0.0) {
    for (const auto& [term, n] : bag) {
      const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
      if (it != vocabulary.end() && *it == term) {
        x[static_cast<std::size_t>(it - vocabulary.begin())] = n / total;
      }
    }
  }
  const auto spread = time_spread(user.times);
  std::copy(spread.begin(), spread.end(), x.begin() + vocabulary.size());
  if (!feature_means.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = (x[i] - feature_means[i]) / feature_scales[i];
    }
  }
  return x;
}

double TravelModel::probability(const UserProfile& user) const {
  const std::vector<double> x = features(user);
  double z = bias;
  for (std::size_t i = 0; i < x.size(); ++i) z += weights[i] * x[i];
  return sigmoid(z);
}

TravelModel train_travel_model(std::span<const UserProfile* const> users,
                               const TravelTrainingOptions& options) {
  if (!(options.threshold_miles > 0.0)) {
    throw ConfigError("travel threshold must be positive");
  }
  if (options.max_epochs <= 0 || !(options.learning_rate > 0.0) ||
      options.l2 < 0.0 || options.min_term_users < 1) {
    throw ConfigError("invalid travel training options");
  }
  if (users.empty()) throw DataError(DataErrc::kEmptyInput, "no travel training users");

  std::vector<double> y;
  y.reserve(users.size());
  std::size_t positives = 0;
  for (const UserProfile* u : users) {
    const bool t = label_traveling(movement_stats(u->user_id, u->geotags),
                                   options.threshold_miles);
    y.push_back(t ? 1.0 : 0.0);
    positives += t;
  }
  if (positives == 0 || positives == users.size()) {
    throw DataError(DataErrc::kSingleClass,
                    "travel training set has a single class");
  }

  TravelModel m;
  m.threshold_miles = options.threshold_miles;
  {
    std::map<std::string, int> doc_freq;
    for (const UserProfile* u : users) {
      for (const auto& [term, n] : namespaced_union(*u)) {
        if (n > 0) ++doc_freq[term];
      }
    }
    for (const auto& [term, df] : doc_freq) {
      if (df >= options.min_term_users) m.vocabulary.push_back(term);
    }
  }

  std::vector<std::vector<double>> xs;
  xs.reserve(users.size());
  for (const UserProfile* u : users) xs.push_back(m.features(*u));
  const std::size_t dim = m.vocabulary.size() + kTimeSpreadSlots;
  const double n = static_cast<double>(users.size());

  m.feature_means.assign(dim, 0.0);
  m.feature_scales.assign(dim, 1.0);
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto& x : xs) mean += x[j];
    mean /= n;
    double var = 0.0;
    for (const auto& x : xs) var += (x[j] - mean) * (x[j] - mean);
    const double sd = std::sqrt(var / n);
    m.feature_means[j] = mean;
    m.feature_scales[j] = sd > 1e-12 ? sd : 1.0;
    for (auto& x : xs) x[j] = (x[j] - mean) / m.feature_scales[j];
  }

  m.weights.assign(dim, 0.0);
  std::vector<double> grad(dim);
  double previous_loss = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double z = m.bias;
      for (std::size_t j = 0; j < dim; ++j) z += m.weights[j] * xs[i][j];
      const double p = sigmoid(z);
      const double err = p - y[i];
      for (std::size_t j = 0; j < dim; ++j) grad[j] += err * xs[i][j];
      grad_b += err;
      loss += y[i] > 0.5 ? -std::log(std::max(p, 1e-300))
                         : -std::log(std::max(1.0 - p, 1e-300));
    }
    loss /= n;
    double reg = 0.0;
    for (double w : m.weights) reg += w * w;
    loss += 0.5 * options.l2 * reg;
    m.epochs_run = epoch + 1;
    if (std::abs(previous_loss - loss) < options.tolerance) break;
    previous_loss = loss;
    for (std::size_t j = 0; j < dim; ++j) {
      m.weights[j] -= options.learning_rate * (grad[j] / n + options.l2 * m.weights[j]);
    }
    m.bias -= options.learning_rate * grad_b / n;
  }
  return m;
}

TravelSplit filter_travelers(std::span<const UserProfile* const> users,
                             const TravelModel& model) {
  TravelSplit split;
  for (std::size_t i = 0; i < users.size(); ++i) {
    (model.is_traveling(*users[i]) ? split.removed : split.kept).push_back(i);
  }
  return split;
}

}  // namespace geoinfer
