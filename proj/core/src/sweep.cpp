#include "qtf/sweep.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "config_json.hpp"

namespace qtf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": invalid JSON: " + e.what());
  }
}

void set_path(json& doc, const std::string& path, const json& value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw std::invalid_argument("sweep axis path '" + path + "' has an empty segment");
    if (!node->is_object()) throw std::invalid_argument("sweep axis path '" + path + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

SweepResult result_from_json(const json& j) {
  SweepResult r;
  r.index = j.at("index").get<std::size_t>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.error = j.value("error", "");
  if (j.contains("summary") && !j.at("summary").is_null()) r.summary = j.at("summary").dump();
  return r;
}

json result_to_json(const SweepResult& r) {
  json j = {{"index", r.index}, {"config_hash", r.config_hash}, {"status", r.status}};
  if (!r.error.empty()) j["error"] = r.error;
  j["summary"] = r.summary.empty() ? json(nullptr) : json::parse(r.summary);
  return j;
}

/// A run directory left behind by a completed run with the same hash.
bool completed_on_disk(const fs::path& dir, const std::string& hash, std::string& summary) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return false;
  try {
    const json m = json::parse(in);
    if (m.value("config_hash", "") != hash || !m.value("complete", false)) return false;
    summary = m.at("summary").dump();
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

SweepManifest parse_manifest(const std::string& text) {
  const json doc = parse_json(text, "sweep manifest");
  if (!doc.is_object()) throw std::invalid_argument("sweep manifest: expected an object");
  for (const auto& [key, v] : doc.items())
    if (key != "base" && key != "axes" && key != "results")
      throw std::invalid_argument("sweep manifest: unknown key '" + key + "'");
  if (!doc.contains("base") || !doc.at("base").is_object())
    throw std::invalid_argument("sweep manifest: 'base' must be a config object");

  SweepManifest m;
  m.base = doc.at("base").dump();
  for (const auto& a : doc.value("axes", json::array())) {
    if (!a.contains("path") || !a.contains("values") || !a.at("values").is_array() ||
        a.at("values").empty())
      throw std::invalid_argument("sweep manifest: each axis needs 'path' and a non-empty 'values'");
    SweepAxis axis{a.at("path").get<std::string>(), {}};
    for (const auto& v : a.at("values")) axis.values.push_back(v.dump());
    m.axes.push_back(std::move(axis));
  }
  for (const auto& r : doc.value("results", json::array())) m.results.push_back(result_from_json(r));
  return m;
}

std::string manifest_to_json(const SweepManifest& manifest) {
  json axes = json::array();
  for (const auto& a : manifest.axes) {
    json values = json::array();
    for (const auto& v : a.values) values.push_back(json::parse(v));
    axes.push_back({{"path", a.path}, {"values", values}});
  }
  json results = json::array();
  for (const auto& r : manifest.results) results.push_back(result_to_json(r));
  return json{{"base", json::parse(manifest.base)}, {"axes", axes}, {"results", results}}.dump(2);
}

std::vector<SweepPoint> expand_sweep(const SweepManifest& manifest) {
  std::size_t total = 1;
  for (const auto& a : manifest.axes) {
    if (a.values.empty()) throw std::invalid_argument("sweep axis '" + a.path + "' has no values");
    if (total > kMaxSweepRuns / a.values.size())
      throw std::invalid_argument("sweep expands to more than 10000 runs");
    total *= a.values.size();
  }
  const json base = parse_json(manifest.base, "sweep base config");
  std::vector<SweepPoint> points(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    json doc = base;
    std::size_t rest = idx;
    for (std::size_t ax = manifest.axes.size(); ax-- > 0;) {
      const auto& axis = manifest.axes[ax];
      set_path(doc, axis.path, json::parse(axis.values[rest % axis.values.size()]));
      rest /= axis.values.size();
    }
    points[idx].index = idx;
    try {
      points[idx].config = detail::config_json(detail::config_from_json(doc), true).dump();
    } catch (const ConfigError& e) {
      points[idx].error = e.what();
    }
  }
  return points;
}

SweepManifest run_sweep(const SweepManifest& manifest, const SweepOptions& options) {
  if (options.parallelism < 1) throw std::invalid_argument("sweep parallelism must be >= 1");
  const std::vector<SweepPoint> points = expand_sweep(manifest);

  std::map<std::string, SweepResult> done;
  if (options.resume)
    for (const auto& r : manifest.results)
      if (r.status == "ok") done.emplace(r.config_hash, r);

  std::vector<SweepResult> results(points.size());
  std::mutex log_mutex;
  auto log = [&](const std::string& line) {
    if (!options.log) return;
    std::lock_guard lock(log_mutex);
    *options.log << line << std::flush;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const SweepPoint& pt = points[i];
      SweepResult& res = results[i];
      res.index = pt.index;
      if (!pt.error.empty()) {
        res.status = "failed";
        res.error = pt.error;
        log("run " + std::to_string(i) + ": invalid config: " + pt.error + "\n");
        continue;
      }
      RunConfig cfg = detail::config_from_json(json::parse(pt.config));
      res.config_hash = config_hash(cfg);
      cfg.output_dir = (fs::path(cfg.output_dir) / res.config_hash).string();

      if (options.resume) {
        if (auto it = done.find(res.config_hash); it != done.end()) {
          res = it->second;
          res.index = pt.index;
          res.reused = true;
          continue;
        }
        std::string summary;
        if (completed_on_disk(cfg.output_dir, res.config_hash, summary)) {
          res.status = "ok";
          res.summary = summary;
          res.reused = true;
          continue;
        }
      }

      std::ostringstream run_log;
      try {
        const RunSummary s = run_single(cfg, {.log = &run_log, .threads = options.threads});
        res.status = s.complete ? "ok" : "failed";
        res.error = s.error;
        res.summary = summary_to_json(s);
      } catch (const std::exception& e) {
        res.status = "failed";
        res.error = e.what();
      }
      log(run_log.str() + "run " + std::to_string(i) + " " + res.config_hash + ": " + res.status +
          (res.error.empty() ? "" : " (" + res.error + ")") + "\n");
    }
  };

  const int n_workers =
      static_cast<int>(std::min<std::size_t>(options.parallelism, std::max<std::size_t>(points.size(), 1)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  SweepManifest out = manifest;
  out.results = std::move(results);
  return out;
}

}  // namespace qtf
