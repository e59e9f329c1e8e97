#include "wxspeed/serialize.hpp"

#include <cmath>

#include "wxspeed/csv.hpp"
#include "wxspeed/error.hpp"
#include "wxspeed/timeutil.hpp"

namespace wxspeed {

namespace {

using csv::format_double;

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("JSON: missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("JSON: bad field '") + key + "': " + e.what());
  }
}

double knot_from_json(const Json& j) {
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "+inf")) {
    return kInfinity;
  }
  if (j.is_number()) return j.get<double>();
  throw Error(ErrorCode::kParse, "JSON: knot must be a number or \"inf\"");
}

template <typename T, typename F>
std::vector<T> many(const Json& j, F one) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(one(e));
  } else {
    out.push_back(one(j));
  }
  return out;
}

}  // namespace

void write_pairs(std::ostream& out, const std::vector<SpeedPair>& pairs) {
  out << "link_id,t0_iso8601,t_star_iso8601,v_before_kmh,v_after_kmh,cross_day\n";
  for (const auto& p : pairs) {
    out << p.link_id << ',' << format_instant(p.t0) << ',' << format_instant(p.t_star) << ','
        << format_double(p.v_before) << ',' << format_double(p.v_after) << ','
        << (p.cross_day ? "true" : "false") << '\n';
  }
}

std::vector<SpeedPair> read_pairs(std::istream& in) {
  const auto table = csv::read(in);
  std::vector<SpeedPair> out;
  if (table.empty()) return out;
  const auto c_id = table.require("link_id");
  const auto c_t0 = table.require("t0_iso8601");
  const auto c_ts = table.require("t_star_iso8601");
  const auto c_vb = table.require("v_before_kmh");
  const auto c_va = table.require("v_after_kmh");
  const auto c_cd = table.require("cross_day");
  const std::size_t width = table.header.size();
  for (const auto& row : table.rows) {
    if (row.fields.size() < width) throw ParseError(row.line, "too few fields");
    SpeedPair p;
    p.link_id = row.fields[c_id];
    if (p.link_id.empty()) throw ParseError(row.line, "empty link_id");
    const auto t0 = parse_instant(row.fields[c_t0]);
    const auto ts = parse_instant(row.fields[c_ts]);
    if (!t0 || !ts) throw ParseError(row.line, "unparseable timestamp");
    p.t0 = *t0;
    p.t_star = *ts;
    p.v_before = csv::parse_double(row.fields[c_vb], row.line, "v_before_kmh");
    p.v_after = csv::parse_double(row.fields[c_va], row.line, "v_after_kmh");
    if (p.v_before < 0.0 || p.v_after < 0.0) throw ParseError(row.line, "negative speed");
    const auto& cd = row.fields[c_cd];
    if (cd == "true" || cd == "1") {
      p.cross_day = true;
    } else if (cd == "false" || cd == "0") {
      p.cross_day = false;
    } else {
      throw ParseError(row.line, "cross_day must be true or false");
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_speeds(std::ostream& out, const std::vector<SpeedObservation>& speeds) {
  out << "link_id,timestamp_iso8601,speed_kmh\n";
  for (const auto& s : speeds) {
    out << s.link_id << ',' << format_instant(s.timestamp) << ',' << format_double(s.speed_kmh)
        << '\n';
  }
}

void write_links(std::ostream& out, const std::vector<Link>& links) {
  out << "link_id,frc,ffs_kmh,zone\n";
  for (const auto& l : links) {
    out << l.id << ',' << l.frc.value() << ',' << format_double(l.ffs_kmh) << ','
        << l.zone.value_or("") << '\n';
  }
}

Json to_json(const LocalThresholdModel& m) {
  return {{"link_id", m.link_id}, {"theta0", m.theta0}, {"theta1", m.theta1}, {"n_pairs", m.n_pairs}};
}

Json to_json(const MarsModel& m) {
  Json knots = Json::array();
  for (const double k : m.knots) {
    if (std::isinf(k)) {
      knots.push_back("inf");
    } else {
      knots.push_back(k);
    }
  }
  Json segments = Json::array();
  for (const auto& s : m.segments) segments.push_back({s.slope, s.intercept});
  return {{"link_id", m.link_id}, {"knots", knots}, {"segments", segments}};
}

Json to_json(const GlobalModel& g) {
  return {{"theta0_norm_mean", g.theta0_norm_mean()},
          {"theta1_mean", g.theta1_mean()},
          {"alpha", g.alpha()},
          {"beta", g.beta()},
          {"n_links", g.n_links()}};
}

Json to_json(const RmseReport& r) {
  Json per_link = Json::object();
  for (const auto& [id, l] : r.per_link) per_link[id] = {{"rmse", l.rmse}, {"n_obs", l.n_obs}};
  return {{"total", r.total}, {"n_links", r.n_links}, {"n_obs", r.n_obs}, {"per_link", per_link}};
}

Json to_json(const FilterReport& r) {
  return {{"n_input", r.n_input},
          {"n_aberrant_removed", r.n_aberrant_removed},
          {"n_links_dropped", r.n_links_dropped},
          {"n_sparse_removed", r.n_sparse_removed},
          {"n_output", r.n_output}};
}

Json to_json(const Comparison& c) { return {{"delta", c.delta}, {"delta_pct", c.delta_pct}}; }

LocalThresholdModel threshold_model_from_json(const Json& j) {
  LocalThresholdModel m{get<std::string>(j, "link_id"), get<double>(j, "theta0"),
                        get<double>(j, "theta1"), get<std::size_t>(j, "n_pairs")};
  validate(m);
  return m;
}

MarsModel mars_model_from_json(const Json& j) {
  MarsModel m;
  m.link_id = get<std::string>(j, "link_id");
  const auto knots = get<Json>(j, "knots");
  const auto segments = get<Json>(j, "segments");
  if (!knots.is_array() || !segments.is_array()) {
    throw Error(ErrorCode::kParse, "JSON: knots and segments must be arrays");
  }
  for (const auto& k : knots) m.knots.push_back(knot_from_json(k));
  for (const auto& s : segments) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
      throw Error(ErrorCode::kParse, "JSON: each segment must be [slope, intercept]");
    }
    m.segments.push_back({s[0].get<double>(), s[1].get<double>()});
  }
  validate(m);
  return m;
}

GlobalModel global_model_from_json(const Json& j) {
  // alpha and beta are derived; the stored values are informational
  return GlobalModel::from_means(get<double>(j, "theta0_norm_mean"), get<double>(j, "theta1_mean"),
                                 j.contains("n_links") ? get<std::size_t>(j, "n_links") : 0);
}

std::vector<LocalThresholdModel> threshold_models_from_json(const Json& j) {
  return many<LocalThresholdModel>(j, threshold_model_from_json);
}

std::vector<MarsModel> mars_models_from_json(const Json& j) {
  return many<MarsModel>(j, mars_model_from_json);
}

Json read_json(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

void write_per_link_rmse(std::ostream& out, const RmseReport& r) {
  out << "link_id,rmse,n_obs\n";
  for (const auto& [id, l] : r.per_link) out << id << ',' << format_double(l.rmse) << ',' << l.n_obs << '\n';
}

void write_density(std::ostream& out, const stats::DensityGrid& grid) {
  out << "x,y,density\n";
  for (std::size_t j = 0; j < grid.grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.grid.nx; ++i) {
      out << format_double(grid.grid.x(i)) << ',' << format_double(grid.grid.y(j)) << ','
          << format_double(grid.at(i, j)) << '\n';
    }
  }
}

}  // namespace wxspeed
