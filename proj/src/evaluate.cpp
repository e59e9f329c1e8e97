#include "wxspeed/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wxspeed/error.hpp"

namespace wxspeed {

SplitResult split_pairs(const std::vector<SpeedPair>& pairs, double train_fraction,
                        std::uint64_t seed) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot split an empty pair list");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::map<LinkId, std::vector<std::size_t>> by_link;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_link[pairs[i].link_id].push_back(i);

  struct Quota {
    std::vector<std::size_t>* members;
    std::size_t take;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (auto& [id, members] : by_link) {
    const double exact = train_fraction * static_cast<double>(members.size());
    auto take = static_cast<std::size_t>(std::floor(exact));
    take = std::clamp<std::size_t>(take, 1, members.size());
    quotas.push_back({&members, take, exact - std::floor(exact)});
    assigned += take;
  }
  const auto target = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(pairs.size())));

  std::vector<std::size_t> order(quotas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
  while (assigned < target) {
    bool progressed = false;
    for (const std::size_t q : order) {
      if (assigned == target) break;
      if (quotas[q].take < quotas[q].members->size()) {
        ++quotas[q].take;
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  // the one-pair minimum can overshoot the target; trim the smallest remainders first
  while (assigned > target) {
    bool progressed = false;
    for (auto it = order.rbegin(); it != order.rend() && assigned > target; ++it) {
      if (quotas[*it].take > 1) {
        --quotas[*it].take;
        --assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> in_train(pairs.size(), false);
  for (auto& q : quotas) {
    auto members = *q.members;
    // Fisher-Yates with an explicit bounded draw, so the permutation is library-independent
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t k = 0; k < q.take; ++k) in_train[members[k]] = true;
  }

  SplitResult out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    (in_train[i] ? out.train : out.test).push_back(pairs[i]);
  }
  return out;
}

RmseReport rmse(const std::vector<Residual>& residuals) {
  if (residuals.empty()) throw Error(ErrorCode::kInvalidArgument, "RMSE of an empty residual list");
  std::map<LinkId, std::pair<double, std::size_t>> acc;
  for (const auto& r : residuals) {
    const double e = r.predicted - r.observed;
    auto& [sum, count] = acc[r.link_id];
    sum += e * e;
    ++count;
  }
  RmseReport report;
  for (const auto& [id, a] : acc) {
    const double link_rmse = std::sqrt(a.first / static_cast<double>(a.second));
    report.per_link[id] = {link_rmse, a.second};
    report.total += link_rmse;
    report.n_obs += a.second;
  }
  report.n_links = report.per_link.size();
  return report;
}

Comparison compare_models(const RmseReport& a, const RmseReport& b) {
  const double delta = b.total - a.total;
  if (a.total == 0.0) {
    if (delta != 0.0) {
      throw Error(ErrorCode::kUndefinedPercentage, "reference RMSE is zero; percentage undefined");
    }
    return {0.0, 0.0};
  }
  return {delta, delta / a.total * 100.0};
}

RmseReport score(const std::vector<SpeedPair>& pairs, const Predictor& predict) {
  std::vector<Residual> residuals;
  residuals.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (auto v = predict(p)) residuals.push_back({*v, p.v_after, p.link_id});
  }
  if (residuals.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no pair could be scored by the model");
  }
  return rmse(residuals);
}

std::map<std::string, RmseReport> rmse_by_zone(const RmseReport& report, const LinkTable& links) {
  std::map<std::string, RmseReport> out;
  for (const auto& [id, r] : report.per_link) {
    const auto it = links.find(id);
    const std::string zone = it != links.end() && it->second.zone ? *it->second.zone : std::string{};
    auto& z = out[zone];
    z.per_link[id] = r;
    z.total += r.rmse;
    z.n_obs += r.n_obs;
    z.n_links = z.per_link.size();
  }
  return out;
}

}  // namespace wxspeed
