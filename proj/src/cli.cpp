#include "wxspeed/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "wxspeed/csv.hpp"
#include "wxspeed/error.hpp"
#include "wxspeed/evaluate.hpp"
#include "wxspeed/globalize.hpp"
#include "wxspeed/ingest.hpp"
#include "wxspeed/mars.hpp"
#include "wxspeed/pairing.hpp"
#include "wxspeed/serialize.hpp"
#include "wxspeed/stats.hpp"
#include "wxspeed/synth.hpp"
#include "wxspeed/threshold.hpp"
#include "wxspeed/timeutil.hpp"

namespace wxspeed::cli {

namespace {

namespace fs = std::filesystem;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

/// Input that is either a file or the caller's stdin.
class Input {
 public:
  Input(const std::string& path, std::istream& stdin_stream) {
    if (path.empty() || path == "-") {
      stream_ = &stdin_stream;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_{};
};

/// Writes `content` to stdout or atomically to `path` (temporary sibling, then rename).
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    out.flush();
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::kIo, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move output into '" + path + "'");
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Runs fn(i) for i in [0, n) on `jobs` threads; fn writes only to its own slot.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::map<LinkId, std::vector<SpeedPair>> group_pairs(const std::vector<SpeedPair>& pairs) {
  std::map<LinkId, std::vector<SpeedPair>> groups;
  for (const auto& p : pairs) groups[p.link_id].push_back(p);
  return groups;
}

/// Per-link fit with insufficient-data links skipped. Other errors propagate.
template <typename Model, typename Fit>
std::vector<Model> fit_per_link(const std::map<LinkId, std::vector<SpeedPair>>& groups,
                                std::size_t jobs, Fit fit, std::vector<std::string>& skipped) {
  std::vector<const std::vector<SpeedPair>*> work;
  std::vector<LinkId> ids;
  for (const auto& [id, ps] : groups) {
    ids.push_back(id);
    work.push_back(&ps);
  }
  std::vector<std::optional<Model>> slots(work.size());
  std::vector<std::exception_ptr> errors(work.size());
  std::vector<std::string> skip_reason(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    try {
      slots[i] = fit(*work[i]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInsufficientData) {
        skip_reason[i] = e.what();
      } else {
        errors[i] = std::current_exception();
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  std::vector<Model> models;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (slots[i]) {
      models.push_back(std::move(*slots[i]));
    } else {
      skipped.push_back(ids[i] + ": " + skip_reason[i]);
    }
  }
  return models;
}

void report_skipped(const std::vector<std::string>& skipped, std::ostream& err) {
  for (const auto& s : skipped) err << "skipped link " << s << '\n';
}

WeatherCondition condition_arg(const std::string& s) {
  const auto c = parse_weather_condition(s);
  if (!c) throw Error(ErrorCode::kInvalidArgument, "unknown weather condition '" + s + "'");
  return *c;
}

std::string format_speed(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

LinkTable load_links(const std::string& path, const std::string& zone_column, std::istream& in) {
  Input src(path, in);
  return index_links(parse_links(src.get(), zone_column));
}

std::vector<SpeedPair> load_pairs(const std::string& path, std::istream& in) {
  Input src(path, in);
  return read_pairs(src.get());
}

const Link& find_link(const LinkTable& links, const LinkId& id) {
  const auto it = links.find(id);
  if (it == links.end()) throw Error(ErrorCode::kUnknownLink, "link '" + id + "' not in link table");
  return it->second;
}

std::vector<NormalizedParams> normalize_all(const std::vector<LocalThresholdModel>& models,
                                            const LinkTable& links) {
  std::vector<NormalizedParams> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(normalize_params(m, find_link(links, m.link_id)));
  return out;
}

// ---------------------------------------------------------------------------------------------

struct CommonOpts {
  std::string links;
  std::string zone_column{"zone"};
  std::string out;
  std::size_t jobs{1};
};

struct IngestOpts {
  std::string speeds;
  std::size_t min_records{100};
  std::string report;
};

void cmd_ingest(const CommonOpts& c, const IngestOpts& o, Streams io) {
  const auto links = load_links(c.links, c.zone_column, io.in);
  Input src(o.speeds, io.in);
  const auto speeds = parse_speed_records(src.get());
  const auto [kept, report] = filter_speeds(speeds, links, o.min_records);
  std::ostringstream csv_out;
  write_speeds(csv_out, kept);
  emit(c.out, csv_out.str(), io.out);
  if (o.report.empty()) {
    io.err << dump(to_json(report));
  } else {
    emit(o.report, dump(to_json(report)), io.out);
  }
}

struct PairOpts {
  std::string speeds;
  std::string weather;
  std::string from{"NONE"};
  std::string to{"SOFT_RAIN"};
  double h_minutes{5.0};
  double propagation_minutes{15.0};
  bool no_cross_day{false};
};

Seconds minutes_arg(double minutes, const char* what) {
  if (!(minutes > 0.0)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be > 0");
  return Seconds{static_cast<std::int64_t>(std::llround(minutes * 60.0))};
}

void cmd_pair(const CommonOpts& c, const PairOpts& o, Streams io) {
  Input speeds_src(o.speeds, io.in);
  const auto speeds = parse_speed_records(speeds_src.get());
  Input weather_src(o.weather, io.in);
  const auto weather = parse_weather_records(weather_src.get());
  const auto from = condition_arg(o.from);
  const auto to = condition_arg(o.to);
  if (from == to) throw Error(ErrorCode::kInvalidArgument, "from and to conditions must differ");

  const auto intervals = propagate_weather(weather, minutes_arg(o.propagation_minutes, "--propagation-minutes"));
  const auto transitions = detect_transitions(intervals, from, to);
  PairingOptions popt;
  popt.h = minutes_arg(o.h_minutes, "--h-minutes");
  popt.cross_day = !o.no_cross_day;
  const auto pairs = build_pairs(speeds, transitions, intervals, popt);

  std::ostringstream os;
  write_pairs(os, pairs);
  emit(c.out, os.str(), io.out);
  const auto n_cross = std::count_if(pairs.begin(), pairs.end(), [](const SpeedPair& p) { return p.cross_day; });
  io.err << "transitions: " << transitions.size() << ", pairs: " << pairs.size()
         << " (cross-day: " << n_cross << ")\n";
}

struct FitOpts {
  std::string pairs{"-"};
  std::size_t max_terms{4};
  std::size_t min_segment_points{10};
  double gcv_penalty{3.0};
  std::size_t min_pairs{2};
};

std::vector<MarsModel> fit_all_mars(const std::vector<SpeedPair>& pairs, const FitOpts& o,
                                    std::size_t jobs, std::vector<std::string>& skipped) {
  const MarsOptions mopt{o.max_terms, o.min_segment_points, o.gcv_penalty};
  return fit_per_link<MarsModel>(group_pairs(pairs), jobs,
                                 [&](const std::vector<SpeedPair>& ps) { return fit_mars_detailed(ps, mopt).model; },
                                 skipped);
}

std::vector<LocalThresholdModel> fit_all_threshold(const std::vector<SpeedPair>& pairs,
                                                   const FitOpts& o, std::size_t jobs,
                                                   std::vector<std::string>& skipped) {
  return fit_per_link<LocalThresholdModel>(
      group_pairs(pairs), jobs,
      [&](const std::vector<SpeedPair>& ps) {
        if (ps.size() < o.min_pairs) {
          throw Error(ErrorCode::kInsufficientData, "fewer than " + std::to_string(o.min_pairs) + " pairs");
        }
        return fit_threshold(ps);
      },
      skipped);
}

void cmd_fit_mars(const CommonOpts& c, const FitOpts& o, Streams io) {
  const auto pairs = load_pairs(o.pairs, io.in);
  std::vector<std::string> skipped;
  const auto models = fit_all_mars(pairs, o, c.jobs, skipped);
  report_skipped(skipped, io.err);
  if (models.empty()) throw Error(ErrorCode::kInsufficientData, "no link had enough pairs for a MARS fit");
  Json arr = Json::array();
  for (const auto& m : models) arr.push_back(to_json(m));
  emit(c.out, dump(arr), io.out);
}

void cmd_fit_threshold(const CommonOpts& c, const FitOpts& o, Streams io) {
  const auto pairs = load_pairs(o.pairs, io.in);
  std::vector<std::string> skipped;
  const auto models = fit_all_threshold(pairs, o, c.jobs, skipped);
  report_skipped(skipped, io.err);
  if (models.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no link had enough pairs for a threshold fit");
  }
  Json arr = Json::array();
  for (const auto& m : models) arr.push_back(to_json(m));
  emit(c.out, dump(arr), io.out);
}

struct GlobalizeOpts {
  std::string model;
  bool weighted{false};
};

GlobalModel globalize(const std::vector<LocalThresholdModel>& models, const LinkTable& links,
                      bool weighted) {
  std::optional<std::vector<double>> weights;
  if (weighted) {
    weights.emplace();
    for (const auto& m : models) weights->push_back(static_cast<double>(m.n_pairs));
  }
  return aggregate_global(normalize_all(models, links), weights);
}

void cmd_globalize(const CommonOpts& c, const GlobalizeOpts& o, Streams io) {
  const auto links = load_links(c.links, c.zone_column, io.in);
  Input src(o.model, io.in);
  const auto models = threshold_models_from_json(read_json(src.get()));
  emit(c.out, dump(to_json(globalize(models, links, o.weighted))), io.out);
}

struct EvaluateOpts {
  FitOpts fit;
  double train_fraction{0.9};
  std::uint64_t seed{0};
  std::string per_link_csv;
  bool weighted{false};
};

void cmd_evaluate(const CommonOpts& c, const EvaluateOpts& o, Streams io) {
  const auto links = load_links(c.links, c.zone_column, io.in);
  const auto pairs = load_pairs(o.fit.pairs, io.in);
  for (const auto& p : pairs) find_link(links, p.link_id);
  const auto split = split_pairs(pairs, o.train_fraction, o.seed);

  std::vector<std::string> skipped;
  const auto mars = fit_all_mars(split.train, o.fit, c.jobs, skipped);
  const auto thresholds = fit_all_threshold(split.train, o.fit, c.jobs, skipped);
  report_skipped(skipped, io.err);
  if (mars.empty() || thresholds.empty()) {
    throw Error(ErrorCode::kInsufficientData, "not enough training pairs to fit both local models");
  }
  const GlobalModel global = globalize(thresholds, links, o.weighted);

  std::map<LinkId, const MarsModel*> mars_by_link;
  for (const auto& m : mars) mars_by_link[m.link_id] = &m;
  std::map<LinkId, const LocalThresholdModel*> thr_by_link;
  for (const auto& m : thresholds) thr_by_link[m.link_id] = &m;

  // every model is scored on the same test pairs: links that carry both local models
  std::vector<SpeedPair> test;
  for (const auto& p : split.test) {
    if (mars_by_link.count(p.link_id) != 0 && thr_by_link.count(p.link_id) != 0) test.push_back(p);
  }
  if (test.empty()) throw Error(ErrorCode::kInsufficientData, "no test pair on a link with fitted models");

  const auto r_mars = score(test, [&](const SpeedPair& p) {
    return std::optional<double>(predict_mars(*mars_by_link.at(p.link_id), p.v_before));
  });
  const auto r_thr = score(test, [&](const SpeedPair& p) {
    return std::optional<double>(predict_threshold(*thr_by_link.at(p.link_id), p.v_before));
  });
  const auto r_glob = score(test, [&](const SpeedPair& p) {
    return std::optional<double>(predict_global(global, links.at(p.link_id), p.v_before));
  });
  const auto r_identity = score(test, [](const SpeedPair& p) { return std::optional<double>(p.v_before); });

  Json result{{"n_train", split.train.size()},
              {"n_test", test.size()},
              {"global_model", to_json(global)},
              {"mars", to_json(r_mars)},
              {"threshold", to_json(r_thr)},
              {"global", to_json(r_glob)},
              {"identity", to_json(r_identity)},
              {"mars_vs_threshold", to_json(compare_models(r_mars, r_thr))},
              {"threshold_vs_global", to_json(compare_models(r_thr, r_glob))}};

  // climate-zone check: network rule versus a rule aggregated inside each zone
  Json zones = Json::object();
  const auto glob_by_zone = rmse_by_zone(r_glob, links);
  for (const auto& [zone, zr] : glob_by_zone) {
    std::vector<LocalThresholdModel> members;
    for (const auto& m : thresholds) {
      const auto& l = links.at(m.link_id);
      if (l.zone.value_or("") == zone) members.push_back(m);
    }
    Json z{{"n_links", zr.n_links}, {"global_rmse", zr.total}};
    if (!members.empty()) {
      const GlobalModel zone_model = globalize(members, links, o.weighted);
      std::vector<SpeedPair> zone_test;
      for (const auto& p : test) {
        if (links.at(p.link_id).zone.value_or("") == zone) zone_test.push_back(p);
      }
      const auto zr_local = score(zone_test, [&](const SpeedPair& p) {
        return std::optional<double>(predict_global(zone_model, links.at(p.link_id), p.v_before));
      });
      z["zone_model"] = to_json(zone_model);
      z["zone_model_rmse"] = zr_local.total;
    }
    zones[zone] = z;
  }
  result["zones"] = zones;

  if (!o.per_link_csv.empty()) {
    std::ostringstream os;
    os << "link_id,rmse_mars,rmse_threshold,rmse_global,n_obs\n";
    for (const auto& [id, l] : r_thr.per_link) {
      os << id << ',' << csv::format_double(r_mars.per_link.at(id).rmse) << ','
         << csv::format_double(l.rmse) << ',' << csv::format_double(r_glob.per_link.at(id).rmse)
         << ',' << l.n_obs << '\n';
    }
    emit(o.per_link_csv, os.str(), io.out);
  }
  emit(c.out, dump(result), io.out);
}

struct CorrectOpts {
  std::string model;
  std::vector<std::string> speeds;
  std::string forecast;
  double validity_minutes{15.0};
};

void cmd_correct(const CommonOpts& c, const CorrectOpts& o, Streams io) {
  const auto links = load_links(c.links, c.zone_column, io.in);
  Input model_src(o.model, io.in);
  const GlobalModel global = global_model_from_json(read_json(model_src.get()));
  const Seconds horizon = minutes_arg(o.validity_minutes, "--validity-horizon-minutes");
  if (o.speeds.empty() && o.forecast.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give --speed LINK:KMH or --forecast FILE");
  }

  std::ostringstream os;
  for (const auto& spec : o.speeds) {
    const auto colon = spec.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw Error(ErrorCode::kInvalidArgument, "--speed expects LINK:KMH, got '" + spec + "'");
    }
    const double v0 = csv::parse_double(spec.substr(colon + 1), 0, "speed");
    if (v0 < 0.0) throw Error(ErrorCode::kInvalidArgument, "speed must be >= 0");
    os << format_speed(predict_global(global, find_link(links, spec.substr(0, colon)), v0)) << '\n';
  }
  if (!o.forecast.empty()) {
    Input src(o.forecast, io.in);
    const auto forecast = parse_speed_records(src.get());
    os << "link_id,timestamp_iso8601,speed_kmh,corrected_kmh,valid_until_iso8601\n";
    for (const auto& f : forecast) {
      const double v = predict_global(global, find_link(links, f.link_id), f.speed_kmh);
      os << f.link_id << ',' << format_instant(f.timestamp) << ',' << csv::format_double(f.speed_kmh)
         << ',' << csv::format_double(v) << ',' << format_instant(f.timestamp + horizon) << '\n';
    }
  }
  emit(c.out, os.str(), io.out);
}

struct SynthOpts {
  std::string kind{"threshold"};
  double theta0{85.8};
  double theta1{0.16};
  std::string model;
  std::size_t n{1000};
  double v_min{30.0};
  double v_max{150.0};
  double noise_sd{0.0};
  std::uint64_t seed{0};
  std::string link_id{"SYN"};
};

void cmd_synth(const CommonOpts& c, const SynthOpts& o, Streams io) {
  std::vector<SpeedPair> pairs;
  const SpeedRange range{o.v_min, o.v_max};
  if (o.kind == "threshold") {
    pairs = generate_threshold_pairs(o.theta0, o.theta1, o.n, range, o.noise_sd, o.seed, o.link_id);
  } else if (o.kind == "piecewise") {
    if (o.model.empty()) throw Error(ErrorCode::kInvalidArgument, "piecewise synth needs --model");
    Input src(o.model, io.in);
    auto models = mars_models_from_json(read_json(src.get()));
    if (models.size() != 1) throw Error(ErrorCode::kInvalidArgument, "--model must hold exactly one MARS model");
    pairs = generate_piecewise_pairs(models.front(), o.n, range, o.noise_sd, o.seed);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--kind must be threshold or piecewise");
  }
  std::ostringstream os;
  write_pairs(os, pairs);
  emit(c.out, os.str(), io.out);
}

struct StatsOpts {
  std::string what{"ffs"};
  std::string model;
  bool normalized{false};
  std::size_t nx{64};
  std::size_t ny{64};
  double hx{0.0};
  double hy{0.0};
};

Json describe(const std::vector<double>& v) {
  return {{"n", v.size()},
          {"mean", stats::mean(v)},
          {"min", stats::quantile(v, 0.0)},
          {"q1", stats::quantile(v, 0.25)},
          {"median", stats::quantile(v, 0.5)},
          {"q3", stats::quantile(v, 0.75)},
          {"max", stats::quantile(v, 1.0)}};
}

Json anova_json(const std::map<FrcClass, std::vector<double>>& groups, std::ostream& err) {
  std::map<FrcClass, std::vector<double>> usable;
  for (const auto& [frc, v] : groups) {
    if (v.size() >= 2) {
      usable.emplace(frc, v);
    } else {
      err << "FRC " << frc.value() << " left out of ANOVA (fewer than 2 links)\n";
    }
  }
  const auto r = frc_dependence_test(usable);
  return {{"f", r.f}, {"p", r.p}, {"df_between", r.df_between}, {"df_within", r.df_within},
          {"groups", usable.size()}};
}

void cmd_stats(const CommonOpts& c, const StatsOpts& o, Streams io) {
  const auto links = load_links(c.links, c.zone_column, io.in);
  if (o.what == "ffs") {
    std::map<int, std::vector<double>> by_frc;
    for (const auto& [id, l] : links) by_frc[l.frc.value()].push_back(l.ffs_kmh);
    Json j = Json::object();
    for (const auto& [frc, v] : by_frc) {
      j[std::to_string(frc)] = describe(v);
      j[std::to_string(frc)]["name"] = std::string(FrcClass(frc).name());
    }
    emit(c.out, dump(j), io.out);
    return;
  }
  if (o.model.empty()) throw Error(ErrorCode::kInvalidArgument, "--what " + o.what + " needs --model");
  Input src(o.model, io.in);
  const auto models = threshold_models_from_json(read_json(src.get()));
  if (o.what == "density") {
    std::vector<stats::Point2> points;
    for (const auto& m : models) {
      const double t0 = o.normalized ? normalize_params(m, find_link(links, m.link_id)).theta0_norm : m.theta0;
      points.push_back({t0, m.theta1});
    }
    const std::optional<Bandwidth> bw =
        o.hx > 0.0 && o.hy > 0.0 ? std::optional<Bandwidth>(Bandwidth{o.hx, o.hy}) : std::nullopt;
    const Bandwidth used = bw ? *bw : silverman_bandwidth(points);
    const auto grid = param_density(points, used, padded_grid(points, used, o.nx, o.ny));
    std::ostringstream os;
    write_density(os, grid);
    emit(c.out, os.str(), io.out);
    return;
  }
  if (o.what == "anova") {
    std::map<FrcClass, std::vector<double>> raw;
    std::map<FrcClass, std::vector<double>> norm;
    for (const auto& m : models) {
      const Link& l = find_link(links, m.link_id);
      raw[l.frc].push_back(m.theta0);
      norm[l.frc].push_back(normalize_params(m, l).theta0_norm);
    }
    emit(c.out, dump(Json{{"theta0", anova_json(raw, io.err)}, {"theta0_norm", anova_json(norm, io.err)}}),
         io.out);
    return;
  }
  throw Error(ErrorCode::kInvalidArgument, "--what must be ffs, density or anova");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return kIoFailure;
    case ErrorCode::kParse: return kMalformedInput;
    case ErrorCode::kDuplicate: return kDuplicateId;
    case ErrorCode::kUnknownLink: return kUnknownLinkId;
    case ErrorCode::kInsufficientData: return kInsufficientData;
    case ErrorCode::kInvalidModel: return kInvalidModel;
    case ErrorCode::kInvalidArgument: return kInvalidArgument;
    case ErrorCode::kDegenerateVariance: return kDegenerateVariance;
    case ErrorCode::kUndefinedPercentage: return kUndefinedPercentage;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Weather-conditioned road speed correction"};
  app.name("wxspeed");
  app.require_subcommand(1);

  CommonOpts common;
  const auto add_common = [&](CLI::App* sub, bool needs_links) {
    auto* links = sub->add_option("--links", common.links, "links CSV (link_id,frc,ffs_kmh,zone)");
    if (needs_links) links->required();
    sub->add_option("--zone-column", common.zone_column, "links CSV column used as zone label");
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_option("--jobs", common.jobs, "worker threads for per-link work")->check(CLI::PositiveNumber);
  };
  std::function<void(Streams)> action;

  IngestOpts ingest;
  auto* s_ingest = app.add_subcommand("ingest-filter", "drop aberrant speeds and sparse links");
  add_common(s_ingest, true);
  s_ingest->add_option("--speeds", ingest.speeds, "speeds CSV")->required();
  s_ingest->add_option("--min-records", ingest.min_records, "minimum records to keep a link")
      ->check(CLI::PositiveNumber);
  s_ingest->add_option("--report", ingest.report, "filter report JSON path (default stderr)");
  s_ingest->callback([&] { action = [&](Streams io) { cmd_ingest(common, ingest, io); }; });

  PairOpts pair;
  auto* s_pair = app.add_subcommand("pair", "build speed pairs around weather transitions");
  add_common(s_pair, false);
  s_pair->add_option("--speeds", pair.speeds, "filtered speeds CSV")->required();
  s_pair->add_option("--weather", pair.weather, "weather CSV")->required();
  s_pair->add_option("--from-condition", pair.from, "baseline condition");
  s_pair->add_option("--to-condition", pair.to, "adverse condition");
  s_pair->add_option("--h-minutes", pair.h_minutes, "baseline window length");
  s_pair->add_option("--propagation-minutes", pair.propagation_minutes, "weather report validity");
  s_pair->add_flag("--no-cross-day", pair.no_cross_day, "never borrow baselines from other days");
  s_pair->callback([&] { action = [&](Streams io) { cmd_pair(common, pair, io); }; });

  FitOpts fit;
  const auto add_fit = [&](CLI::App* sub) {
    sub->add_option("--pairs", fit.pairs, "pairs CSV (default stdin)");
    sub->add_option("--max-terms", fit.max_terms, "MARS: maximum non-constant terms")->check(CLI::PositiveNumber);
    sub->add_option("--min-segment-points", fit.min_segment_points, "MARS: minimum points per segment")
        ->check(CLI::PositiveNumber);
    sub->add_option("--gcv-penalty", fit.gcv_penalty, "MARS: GCV cost per knot");
    sub->add_option("--min-pairs", fit.min_pairs, "threshold: minimum pairs per link");
  };
  auto* s_mars = app.add_subcommand("fit-mars", "fit per-link MARS models");
  add_common(s_mars, false);
  add_fit(s_mars);
  s_mars->callback([&] { action = [&](Streams io) { cmd_fit_mars(common, fit, io); }; });

  auto* s_thr = app.add_subcommand("fit-threshold", "fit per-link linear thresholded models");
  add_common(s_thr, false);
  add_fit(s_thr);
  s_thr->callback([&] { action = [&](Streams io) { cmd_fit_threshold(common, fit, io); }; });

  GlobalizeOpts glob;
  auto* s_glob = app.add_subcommand("globalize", "aggregate threshold models into a network rule");
  add_common(s_glob, true);
  s_glob->add_option("--model", glob.model, "threshold models JSON")->required();
  s_glob->add_flag("--weighted", glob.weighted, "weight links by pair count");
  s_glob->callback([&] { action = [&](Streams io) { cmd_globalize(common, glob, io); }; });

  EvaluateOpts eval;
  auto* s_eval = app.add_subcommand("evaluate", "split, fit and compare MARS, threshold and global models");
  add_common(s_eval, true);
  s_eval->add_option("--pairs", eval.fit.pairs, "pairs CSV (default stdin)");
  s_eval->add_option("--max-terms", eval.fit.max_terms)->check(CLI::PositiveNumber);
  s_eval->add_option("--min-segment-points", eval.fit.min_segment_points)->check(CLI::PositiveNumber);
  s_eval->add_option("--gcv-penalty", eval.fit.gcv_penalty);
  s_eval->add_option("--min-pairs", eval.fit.min_pairs);
  s_eval->add_option("--train-fraction", eval.train_fraction, "share of pairs used for fitting");
  s_eval->add_option("--seed", eval.seed, "split seed");
  s_eval->add_option("--per-link-csv", eval.per_link_csv, "per-link RMSE CSV path");
  s_eval->add_flag("--weighted", eval.weighted, "weight links by pair count in the network rule");
  s_eval->callback([&] { action = [&](Streams io) { cmd_evaluate(common, eval, io); }; });

  CorrectOpts corr;
  auto* s_corr = app.add_subcommand("correct", "apply the network rule to forecast speeds");
  add_common(s_corr, true);
  s_corr->add_option("--model", corr.model, "global model JSON")->required();
  s_corr->add_option("--speed", corr.speeds, "LINK:KMH, repeatable");
  s_corr->add_option("--forecast", corr.forecast, "forecast speeds CSV");
  s_corr->add_option("--validity-horizon-minutes", corr.validity_minutes,
                     "how long a corrected forecast is reported as applicable");
  s_corr->callback([&] { action = [&](Streams io) { cmd_correct(common, corr, io); }; });

  SynthOpts syn;
  auto* s_syn = app.add_subcommand("synth", "generate synthetic pairs from planted parameters");
  add_common(s_syn, false);
  s_syn->add_option("--kind", syn.kind, "threshold or piecewise");
  s_syn->add_option("--theta0", syn.theta0);
  s_syn->add_option("--theta1", syn.theta1);
  s_syn->add_option("--model", syn.model, "MARS model JSON for --kind piecewise");
  s_syn->add_option("--n", syn.n);
  s_syn->add_option("--v-min", syn.v_min);
  s_syn->add_option("--v-max", syn.v_max);
  s_syn->add_option("--noise-sd", syn.noise_sd);
  s_syn->add_option("--seed", syn.seed);
  s_syn->add_option("--link-id", syn.link_id);
  s_syn->callback([&] { action = [&](Streams io) { cmd_synth(common, syn, io); }; });

  StatsOpts st;
  auto* s_stats = app.add_subcommand("stats", "FFS quantiles by FRC, parameter densities, ANOVA");
  add_common(s_stats, true);
  s_stats->add_option("--what", st.what, "ffs, density or anova");
  s_stats->add_option("--model", st.model, "threshold models JSON");
  s_stats->add_flag("--normalized", st.normalized, "density of theta0/FFS instead of theta0");
  s_stats->add_option("--nx", st.nx)->check(CLI::PositiveNumber);
  s_stats->add_option("--ny", st.ny)->check(CLI::PositiveNumber);
  s_stats->add_option("--hx", st.hx, "bandwidth on theta0 (default Silverman)");
  s_stats->add_option("--hy", st.hy, "bandwidth on theta1 (default Silverman)");
  s_stats->callback([&] { action = [&](Streams io) { cmd_stats(common, st, io); }; });

  std::vector<const char*> argv{"wxspeed"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    action(Streams{in, out, err});
  } catch (const Error& e) {
    err << "wxspeed: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "wxspeed: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace wxspeed::cli
