#include "qpc/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include "qpc/errors.hpp"

namespace qpc {

using nlohmann::json;

std::string_view to_string(OutputFormat format) noexcept { return format == OutputFormat::Json ? "json" : "csv"; }

OutputFormat output_format_from_string(std::string_view text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  throw ConfigError("output.format", "expected 'json' or 'csv', got '" + std::string(text) + "'");
}

namespace {

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(prefix.empty() ? "(root)" : prefix, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(prefix, key), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& prefix) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(prefix, key), "required field missing");
  return *it;
}

std::int64_t as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ConfigError(field, "integer out of range");
  }
  return v.get<std::int64_t>();
}

int as_small_int(const json& v, const std::string& field) {
  const auto x = as_int(v, field);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "integer out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t as_u64(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected a non-negative integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto x = v.get<std::int64_t>();
  if (x < 0) throw ConfigError(field, "must be non-negative");
  return static_cast<std::uint64_t>(x);
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
  return v.get<bool>();
}

const json& as_array(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array");
  return v;
}

AdversaryConfig parse_adversary(const json& obj) {
  reject_unknown(obj, "adversary", {"kind", "params"});
  AdversaryConfig config;
  config.kind = adversary_kind_from_string(as_string(require(obj, "kind", "adversary"), "adversary.kind"));
  const json params = obj.contains("params") ? obj.at("params") : json::object();
  const std::string p = "adversary.params";
  switch (config.kind) {
    case AdversaryKind::None: reject_unknown(params, p, {}); break;
    case AdversaryKind::EveInterceptResend:
    case AdversaryKind::Tp2Intercept:
      reject_unknown(params, p, {"links"});
      if (params.contains("links")) {
        config.links.clear();
        for (const auto& v : as_array(params.at("links"), p + ".links")) config.links.push_back(as_small_int(v, p + ".links"));
      }
      break;
    case AdversaryKind::Tp1FakeInitialState:
      reject_unknown(params, p, {"true_state", "claimed_index"});
      if (params.contains("true_state")) {
        const auto& v = params.at("true_state");
        if (v.is_string()) {
          if (v.get<std::string>() != "zero") throw ConfigError(p + ".true_state", "expected \"zero\" or a GHZ index");
        } else {
          config.true_state_index = as_u64(v, p + ".true_state");
        }
      }
      if (params.contains("claimed_index")) config.claimed_index = as_u64(params.at("claimed_index"), p + ".claimed_index");
      break;
    case AdversaryKind::Tp1FakeResult:
    case AdversaryKind::Tp2FakeResult:
      reject_unknown(params, p, {"pairs"});
      if (params.contains("pairs")) {
        for (const auto& v : as_array(params.at("pairs"), p + ".pairs")) {
          if (!v.is_array() || v.size() != 2) throw ConfigError(p + ".pairs", "each pair must be [i, j]");
          config.pairs.emplace_back(as_small_int(v[0], p + ".pairs"), as_small_int(v[1], p + ".pairs"));
        }
      }
      break;
    case AdversaryKind::ParticipantInfer:
      reject_unknown(params, p, {"attacker", "victim"});
      if (params.contains("attacker")) config.attacker = as_small_int(params.at("attacker"), p + ".attacker");
      if (params.contains("victim")) config.victim = as_small_int(params.at("victim"), p + ".victim");
      break;
    case AdversaryKind::ClassicalPositionTamper:
      reject_unknown(params, p, {"tampered_checks"});
      if (params.contains("tampered_checks")) {
        config.tampered_checks = as_small_int(params.at("tampered_checks"), p + ".tampered_checks");
      }
      break;
  }
  return config;
}

ConfigDocument parse(const json& doc) {
  reject_unknown(doc, "",
                 {"schema_version", "protocol", "n", "m", "check_rounds", "decoy_count", "variant", "adversary",
                  "secrets", "trials", "seed", "spec_pool", "announce_vectors", "decoy_tolerance", "output"});
  const auto version = as_int(require(doc, "schema_version", ""), "schema_version");
  if (version != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(version));
  }

  ConfigDocument out;
  auto& s = out.scenario;
  s.protocol = protocol_kind_from_string(as_string(require(doc, "protocol", ""), "protocol"));
  s.n = as_small_int(require(doc, "n", ""), "n");
  s.m = as_small_int(require(doc, "m", ""), "m");
  if (doc.contains("check_rounds")) s.check_rounds = as_small_int(doc.at("check_rounds"), "check_rounds");
  if (doc.contains("decoy_count")) s.decoy_count = as_small_int(doc.at("decoy_count"), "decoy_count");
  if (doc.contains("variant")) s.variant = variant_from_string(as_string(doc.at("variant"), "variant"));
  if (doc.contains("adversary")) s.adversary = parse_adversary(doc.at("adversary"));
  if (doc.contains("secrets")) {
    const auto& sec = doc.at("secrets");
    reject_unknown(sec, "secrets", {"policy", "values"});
    s.secret_policy = secret_policy_from_string(as_string(require(sec, "policy", "secrets"), "secrets.policy"));
    if (sec.contains("values")) {
      for (const auto& v : as_array(sec.at("values"), "secrets.values")) {
        try {
          s.secret_values.push_back(bits_from_string(as_string(v, "secrets.values")));
        } catch (const ContractError& e) {
          throw ConfigError("secrets.values", e.what());
        }
      }
    }
  }
  if (doc.contains("trials")) s.trials = as_u64(doc.at("trials"), "trials");
  if (doc.contains("seed")) {
    s.seed = as_u64(doc.at("seed"), "seed");
    out.has_seed = true;
  }
  if (doc.contains("spec_pool")) {
    for (const auto& v : as_array(doc.at("spec_pool"), "spec_pool")) s.spec_pool.push_back(as_u64(v, "spec_pool"));
  }
  if (doc.contains("announce_vectors")) s.announce_vectors = as_bool(doc.at("announce_vectors"), "announce_vectors");
  if (doc.contains("decoy_tolerance")) s.decoy_tolerance = as_small_int(doc.at("decoy_tolerance"), "decoy_tolerance");
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) out.output.path = as_string(o.at("path"), "output.path");
    if (o.contains("format")) out.output.format = output_format_from_string(as_string(o.at("format"), "output.format"));
  }
  s.validate();
  return out;
}

}  // namespace

ConfigDocument parse_config(const json& doc) {
  try {
    return parse(doc);
  } catch (const json::exception& e) {
    throw ConfigError("", e.what());
  }
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json adversary_to_json(const AdversaryConfig& config) {
  json params = json::object();
  switch (config.kind) {
    case AdversaryKind::None: break;
    case AdversaryKind::EveInterceptResend:
    case AdversaryKind::Tp2Intercept: params["links"] = config.links; break;
    case AdversaryKind::Tp1FakeInitialState:
      params["true_state"] = config.true_state_index ? json(*config.true_state_index) : json("zero");
      params["claimed_index"] = config.claimed_index;
      break;
    case AdversaryKind::Tp1FakeResult:
    case AdversaryKind::Tp2FakeResult: {
      json pairs = json::array();
      for (const auto& [i, j] : config.pairs) pairs.push_back({i, j});
      params["pairs"] = pairs;
      break;
    }
    case AdversaryKind::ParticipantInfer:
      params["attacker"] = config.attacker;
      params["victim"] = config.victim;
      break;
    case AdversaryKind::ClassicalPositionTamper:
      if (config.tampered_checks) params["tampered_checks"] = *config.tampered_checks;
      break;
  }
  return json{{"kind", std::string(to_string(config.kind))}, {"params", params}};
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["protocol"] = std::string(to_string(s.protocol));
  doc["n"] = s.n;
  doc["m"] = s.m;
  if (s.check_rounds) doc["check_rounds"] = *s.check_rounds;
  if (s.decoy_count) doc["decoy_count"] = *s.decoy_count;
  doc["variant"] = std::string(to_string(s.variant));
  doc["adversary"] = adversary_to_json(s.adversary);
  json secrets{{"policy", std::string(to_string(s.secret_policy))}};
  if (s.secret_policy == SecretPolicy::Explicit) {
    json values = json::array();
    for (const auto& v : s.secret_values) values.push_back(to_string(v));
    secrets["values"] = values;
  }
  doc["secrets"] = secrets;
  doc["trials"] = s.trials;
  doc["seed"] = s.seed;
  if (!s.spec_pool.empty()) doc["spec_pool"] = s.spec_pool;
  if (s.announce_vectors) doc["announce_vectors"] = true;
  if (s.decoy_tolerance != 0) doc["decoy_tolerance"] = s.decoy_tolerance;
  return doc;
}

Scenario scenario_from_json(const json& doc) { return parse_config(doc).scenario; }

}  // namespace qpc
