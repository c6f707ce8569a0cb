#include "qtf/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>

#include "config_json.hpp"

namespace qtf {

namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.contains(key)) throw ConfigError(join(path, key), "unknown key");
}

template <class T>
void read(const json& j, const std::string& path, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(join(path, key), "wrong type");
  }
}

void read_double(const json& j, const std::string& path, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) throw ConfigError(join(path, key), "expected a number");
  out = j.at(key).get<double>();
}

void read_int(const json& j, const std::string& path, const char* key, int& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  out = j.at(key).get<int>();
}

DomainSpec parse_domain(const json& j) {
  require_object(j, "domain");
  reject_unknown(j, "domain", {"nx", "ny", "nz", "lx", "ly", "lz", "bc"});
  DomainSpec d;
  read_int(j, "domain", "nx", d.nx);
  read_int(j, "domain", "ny", d.ny);
  read_int(j, "domain", "nz", d.nz);
  read_double(j, "domain", "lx", d.lx);
  read_double(j, "domain", "ly", d.ly);
  read_double(j, "domain", "lz", d.lz);
  if (j.contains("bc")) {
    std::string bc;
    read(j, "domain", "bc", bc);
    try {
      d.bc = boundary_kind_from_string(bc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("domain.bc", e.what());
    }
  }
  return d;
}

ModelParams parse_params(const json& j) {
  require_object(j, "params");
  reject_unknown(j, "params", {"a", "b", "c", "L", "nu", "gamma", "xi", "p_exp", "q_exp", "r_exp"});
  ModelParams p;
  read_double(j, "params", "a", p.a);
  read_double(j, "params", "b", p.b);
  read_double(j, "params", "c", p.c);
  read_double(j, "params", "L", p.L);
  read_double(j, "params", "nu", p.nu);
  read_double(j, "params", "gamma", p.gamma);
  read_double(j, "params", "xi", p.xi);
  read_double(j, "params", "p_exp", p.p_exp);
  read_double(j, "params", "q_exp", p.q_exp);
  read_double(j, "params", "r_exp", p.r_exp);
  return p;
}

PicardSettings parse_picard(const json& j) {
  require_object(j, "picard");
  reject_unknown(j, "picard", {"window", "tol", "max_iters", "metric"});
  PicardSettings s;
  read_double(j, "picard", "window", s.window);
  read_double(j, "picard", "tol", s.tol);
  read_int(j, "picard", "max_iters", s.max_iters);
  if (j.contains("metric")) {
    std::string m;
    read(j, "picard", "metric", m);
    if (m == "monitor")
      s.monitor_metric = true;
    else if (m != "l2")
      throw ConfigError("picard.metric", "expected 'l2' or 'monitor'");
  }
  return s;
}

InitialCondition parse_initial(const json& j) {
  const std::string path = "initial_condition";
  require_object(j, path);
  if (!j.contains("kind")) throw ConfigError(join(path, "kind"), "missing");
  std::string kind;
  read(j, path, "kind", kind);
  if (kind == "zero") {
    reject_unknown(j, path, {"kind"});
    return ZeroInit{};
  }
  if (kind == "sine_mode") {
    reject_unknown(j, path, {"kind", "k", "amplitude", "axis"});
    SineModeInit s;
    read_int(j, path, "k", s.k);
    read_double(j, path, "amplitude", s.amplitude);
    read_int(j, path, "axis", s.axis);
    return s;
  }
  if (kind == "random_smooth") {
    reject_unknown(j, path, {"kind", "seed", "amplitude", "cutoff_mode", "velocity_amplitude"});
    RandomSmoothInit r;
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
        throw ConfigError(join(path, "seed"), "expected an unsigned 64-bit integer");
      r.seed = j.at("seed").get<std::uint64_t>();
    }
    read_double(j, path, "amplitude", r.amplitude);
    read_int(j, path, "cutoff_mode", r.cutoff_mode);
    if (j.contains("velocity_amplitude")) {
      double v = 0.0;
      read_double(j, path, "velocity_amplitude", v);
      r.velocity_amplitude = v;
    }
    return r;
  }
  throw ConfigError(join(path, "kind"), "unknown kind '" + kind + "'");
}

}  // namespace

void RunConfig::validate() const {
  try {
    domain.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("domain", e.what());
  }
  if (params.xi != 0.0) throw ConfigError("params.xi", "xi != 0 is not supported");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (!(t_end >= dt)) throw ConfigError("t_end", "must be >= dt");
  if (snapshot_stride < 0) throw ConfigError("snapshot_stride", "must be >= 0");
  if (record_stride < 1) throw ConfigError("record_stride", "must be >= 1");
  if (mode == RunMode::Picard) {
    if (!picard) throw ConfigError("picard", "required when mode is 'picard'");
    const double steps = picard->window / dt;
    if (!(picard->window > 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw ConfigError("picard.window", "must be a positive whole number of steps");
    if (std::round(steps) > 256) throw ConfigError("picard.window", "at most 256 steps");
    if (!(picard->tol > 0.0)) throw ConfigError("picard.tol", "must be positive");
    if (picard->max_iters < 1) throw ConfigError("picard.max_iters", "must be >= 1");
  }
  if (const auto* s = std::get_if<SineModeInit>(&initial_condition)) {
    if (s->axis < 0 || s->axis > 2) throw ConfigError("initial_condition.axis", "must be 0, 1 or 2");
    if (s->k < 0) throw ConfigError("initial_condition.k", "must be >= 0");
  }
  if (const auto* r = std::get_if<RandomSmoothInit>(&initial_condition)) {
    if (!(r->amplitude >= 0.0)) throw ConfigError("initial_condition.amplitude", "must be >= 0");
    if (r->velocity_amplitude && !(*r->velocity_amplitude >= 0.0))
      throw ConfigError("initial_condition.velocity_amplitude", "must be >= 0");
    if (r->cutoff_mode < 0) throw ConfigError("initial_condition.cutoff_mode", "must be >= 0");
  }
}

namespace detail {

RunConfig config_from_json(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"domain", "params", "dt", "t_end", "mode", "picard", "initial_condition",
                           "snapshot_stride", "record_stride", "monitor", "output_dir"});
  RunConfig c;
  if (!doc.contains("domain")) throw ConfigError("domain", "missing");
  if (!doc.contains("dt")) throw ConfigError("dt", "missing");
  if (!doc.contains("t_end")) throw ConfigError("t_end", "missing");
  c.domain = parse_domain(doc.at("domain"));
  if (doc.contains("params")) c.params = parse_params(doc.at("params"));
  read_double(doc, "", "dt", c.dt);
  read_double(doc, "", "t_end", c.t_end);
  if (doc.contains("mode")) {
    std::string m;
    read(doc, "", "mode", m);
    if (m == "direct")
      c.mode = RunMode::Direct;
    else if (m == "picard")
      c.mode = RunMode::Picard;
    else
      throw ConfigError("mode", "expected 'direct' or 'picard'");
  }
  if (doc.contains("picard")) c.picard = parse_picard(doc.at("picard"));
  if (doc.contains("initial_condition")) c.initial_condition = parse_initial(doc.at("initial_condition"));
  read_int(doc, "", "snapshot_stride", c.snapshot_stride);
  read_int(doc, "", "record_stride", c.record_stride);
  read(doc, "", "monitor", c.monitor);
  read(doc, "", "output_dir", c.output_dir);
  c.validate();
  return c;
}

json config_json(const RunConfig& c, bool include_output_dir) {
  json j;
  j["domain"] = {{"nx", c.domain.nx}, {"ny", c.domain.ny}, {"nz", c.domain.nz},
                 {"lx", c.domain.lx}, {"ly", c.domain.ly}, {"lz", c.domain.lz},
                 {"bc", to_string(c.domain.bc)}};
  const ModelParams& p = c.params;
  j["params"] = {{"a", p.a},         {"b", p.b},         {"c", p.c},        {"L", p.L},
                 {"nu", p.nu},       {"gamma", p.gamma}, {"xi", p.xi},      {"p_exp", p.p_exp},
                 {"q_exp", p.q_exp}, {"r_exp", p.r_exp}};
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["mode"] = c.mode == RunMode::Direct ? "direct" : "picard";
  if (c.picard)
    j["picard"] = {{"window", c.picard->window},
                   {"tol", c.picard->tol},
                   {"max_iters", c.picard->max_iters},
                   {"metric", c.picard->monitor_metric ? "monitor" : "l2"}};
  std::visit(
      [&](const auto& ic) {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, ZeroInit>) {
          j["initial_condition"] = {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<T, SineModeInit>) {
          j["initial_condition"] = {
              {"kind", "sine_mode"}, {"k", ic.k}, {"amplitude", ic.amplitude}, {"axis", ic.axis}};
        } else {
          j["initial_condition"] = {{"kind", "random_smooth"},
                                    {"seed", ic.seed},
                                    {"amplitude", ic.amplitude},
                                    {"cutoff_mode", ic.cutoff_mode}};
          if (ic.velocity_amplitude) j["initial_condition"]["velocity_amplitude"] = *ic.velocity_amplitude;
        }
      },
      c.initial_condition);
  j["snapshot_stride"] = c.snapshot_stride;
  j["record_stride"] = c.record_stride;
  j["monitor"] = c.monitor;
  if (include_output_dir) j["output_dir"] = c.output_dir;
  return j;
}

std::string sha1_blob_hex(const std::string& content) {
  const std::string framed = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(framed.data(), framed.size(), md, &len, EVP_sha1(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace detail

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return detail::config_from_json(doc);
}

std::string config_to_json(const RunConfig& config, bool include_output_dir) {
  return detail::config_json(config, include_output_dir).dump(2);
}

std::string config_hash(const RunConfig& config) {
  return detail::sha1_blob_hex(detail::config_json(config, false).dump());
}

}  // namespace qtf
