#include "hetcomp/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "hetcomp/error.hpp"
#include "json.hpp"

namespace hetcomp {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where, std::set<std::string> known) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

// Doubles that may be infinite travel as the string "inf".
double number_or_inf(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && (j == "inf" || j == "+inf" || j == "infinity")) return kInf;
  fail(where, "expected a number or \"inf\"");
}

json encode_number(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

CoordinationPolicy parse_policy(const json& j, const std::string& where) {
  if (j == "CrossTier") return CoordinationPolicy::CrossTier;
  if (j == "IntraTier") return CoordinationPolicy::IntraTier;
  fail(where, "expected \"CrossTier\" or \"IntraTier\"");
}

const char* policy_name(CoordinationPolicy p) {
  return p == CoordinationPolicy::CrossTier ? "CrossTier" : "IntraTier";
}

TimeFractionEstimator parse_estimator(const json& j, const std::string& where) {
  if (j == "Lemma1") return TimeFractionEstimator::Lemma1;
  if (j == "RenewalOracle") return TimeFractionEstimator::RenewalOracle;
  fail(where, "expected \"Lemma1\" or \"RenewalOracle\"");
}

const char* estimator_name(TimeFractionEstimator e) {
  return e == TimeFractionEstimator::Lemma1 ? "Lemma1" : "RenewalOracle";
}

TierConfig parse_tier(const json& j, const std::string& where) {
  reject_unknown(j, where, {"power", "antennas", "pathloss", "density", "feedback_bits"});
  TierConfig t;
  read(j, "power", t.power, where);
  read(j, "antennas", t.antennas, where);
  read(j, "pathloss", t.pathloss, where);
  read(j, "density", t.density, where);
  if (j.contains("feedback_bits")) {
    t.feedback_bits = number_or_inf(j.at("feedback_bits"), where + ".feedback_bits");
  }
  return t;
}

NetworkConfig parse_network(const json& j, const std::string& where) {
  reject_unknown(j, where,
                 {"tiers", "num_coordinated", "policy", "serving_tier",
                  "truncation_points_per_tier", "tail_compensation"});
  NetworkConfig n;
  if (j.contains("tiers")) {
    const auto& tiers = j.at("tiers");
    if (!tiers.is_array()) fail(where + ".tiers", "expected an array");
    for (std::size_t k = 0; k < tiers.size(); ++k) {
      n.tiers.push_back(parse_tier(tiers[k], where + ".tiers[" + std::to_string(k) + "]"));
    }
  }
  read(j, "num_coordinated", n.num_coordinated, where);
  if (j.contains("policy")) n.policy = parse_policy(j.at("policy"), where + ".policy");
  if (j.contains("serving_tier") && !j.at("serving_tier").is_null()) {
    const auto& s = j.at("serving_tier");
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      fail(where + ".serving_tier", "expected a non-negative integer or null");
    }
    n.serving_tier = s.get<std::size_t>();
  }
  read(j, "truncation_points_per_tier", n.truncation_points_per_tier, where);
  read(j, "tail_compensation", n.tail_compensation, where);
  return n;
}

DelayModel parse_delay(const json& j, const std::string& where) {
  if (j.is_object() && j.contains("erlang")) {
    reject_unknown(j, where, {"erlang"});
    const auto& e = j.at("erlang");
    reject_unknown(e, where + ".erlang", {"stages", "mean"});
    int stages = 1;
    double mean = 0.0;
    read(e, "stages", stages, where + ".erlang");
    read(e, "mean", mean, where + ".erlang");
    if (stages < 1) fail(where + ".erlang.stages", "must be at least 1");
    return DelayModel::erlang(stages, mean);
  }
  reject_unknown(j, where, {"stage_rates", "fixed_offset"});
  DelayModel d;
  read(j, "stage_rates", d.stage_rates, where);
  read(j, "fixed_offset", d.fixed_offset, where);
  return d;
}

json encode_delay(const DelayModel& d) {
  return {{"stage_rates", d.stage_rates}, {"fixed_offset", d.fixed_offset}};
}

OverheadConfig parse_overhead(const json& j, const std::string& where) {
  reject_unknown(j, where, {"coherence", "delay", "tier_delay"});
  OverheadConfig o;
  if (j.contains("coherence")) {
    const auto& c = j.at("coherence");
    reject_unknown(c, where + ".coherence", {"mean_block", "shape"});
    read(c, "mean_block", o.coherence.mean_block, where + ".coherence");
    if (c.contains("shape") && !c.at("shape").is_null()) {
      int shape = 0;
      read(c, "shape", shape, where + ".coherence");
      o.coherence.shape = shape;
    }
  }
  if (j.contains("delay")) o.delay = parse_delay(j.at("delay"), where + ".delay");
  if (j.contains("tier_delay")) {
    const auto& td = j.at("tier_delay");
    if (!td.is_array()) fail(where + ".tier_delay", "expected an array");
    for (std::size_t k = 0; k < td.size(); ++k) {
      if (td[k].is_null()) {
        o.tier_delay.emplace_back();
      } else {
        o.tier_delay.emplace_back(
            parse_delay(td[k], where + ".tier_delay[" + std::to_string(k) + "]"));
      }
    }
  }
  return o;
}

RateMapping parse_mapping(const json& j, const std::string& where, RateMapping m) {
  reject_unknown(j, where,
                 {"kind", "target_sir", "target_sir_db", "target_rate", "shannon_gap",
                  "shannon_gap_db"});
  if (j.contains("kind")) {
    const auto& k = j.at("kind");
    if (k == "FixedTarget") {
      m.kind = RateKind::FixedTarget;
    } else if (k == "ShannonGap") {
      m.kind = RateKind::ShannonGap;
    } else {
      fail(where + ".kind", "expected \"FixedTarget\" or \"ShannonGap\"");
    }
  }
  if (j.contains("target_sir") && j.contains("target_sir_db")) {
    fail(where, "give target_sir or target_sir_db, not both");
  }
  if (j.contains("shannon_gap") && j.contains("shannon_gap_db")) {
    fail(where, "give shannon_gap or shannon_gap_db, not both");
  }
  read(j, "target_sir", m.target_sir, where);
  read(j, "target_rate", m.target_rate, where);
  read(j, "shannon_gap", m.shannon_gap, where);
  double db = 0.0;
  if (j.contains("target_sir_db")) {
    read(j, "target_sir_db", db, where);
    m.target_sir = db_to_linear(db);
  }
  if (j.contains("shannon_gap_db")) {
    read(j, "shannon_gap_db", db, where);
    m.shannon_gap = db_to_linear(db);
  }
  return m;
}

json encode_mapping(const RateMapping& m) {
  return {{"kind", m.kind == RateKind::FixedTarget ? "FixedTarget" : "ShannonGap"},
          {"target_sir", m.target_sir},
          {"target_rate", m.target_rate},
          {"shannon_gap", m.shannon_gap}};
}

SweepConfig parse_sweep(const json& j, const std::string& where) {
  reject_unknown(j, where,
                 {"delay_means", "l_values", "beta_db", "delay_stages", "l_sweep_delay_mean",
                  "renewal_blocks"});
  SweepConfig s;
  read(j, "delay_means", s.delay_means, where);
  read(j, "l_values", s.l_values, where);
  read(j, "beta_db", s.beta_db, where);
  read(j, "delay_stages", s.delay_stages, where);
  read(j, "l_sweep_delay_mean", s.l_sweep_delay_mean, where);
  read(j, "renewal_blocks", s.renewal_blocks, where);
  return s;
}

json encode(const ExperimentConfig& c) {
  json tiers = json::array();
  for (const auto& t : c.network.tiers) {
    tiers.push_back({{"power", t.power},
                     {"antennas", t.antennas},
                     {"pathloss", t.pathloss},
                     {"density", t.density},
                     {"feedback_bits", encode_number(t.feedback_bits)}});
  }
  json network = {{"tiers", tiers},
                  {"num_coordinated", c.network.num_coordinated},
                  {"policy", policy_name(c.network.policy)},
                  {"serving_tier", nullptr},
                  {"truncation_points_per_tier", c.network.truncation_points_per_tier},
                  {"tail_compensation", c.network.tail_compensation}};
  if (c.network.serving_tier) network["serving_tier"] = *c.network.serving_tier;

  json coherence = {{"mean_block", c.overhead.coherence.mean_block}, {"shape", nullptr}};
  if (c.overhead.coherence.shape) coherence["shape"] = *c.overhead.coherence.shape;
  json tier_delay = json::array();
  for (const auto& d : c.overhead.tier_delay) {
    tier_delay.push_back(d ? encode_delay(*d) : json(nullptr));
  }
  json overhead = {{"coherence", coherence},
                   {"delay", encode_delay(c.overhead.delay)},
                   {"tier_delay", tier_delay}};

  json sweep = {{"delay_means", c.sweep.delay_means},
                {"l_values", c.sweep.l_values},
                {"beta_db", c.sweep.beta_db},
                {"delay_stages", c.sweep.delay_stages},
                {"l_sweep_delay_mean", c.sweep.l_sweep_delay_mean},
                {"renewal_blocks", c.sweep.renewal_blocks}};

  return {{"network", network},
          {"overhead", overhead},
          {"coverage", encode_mapping(c.coverage)},
          {"throughput", encode_mapping(c.throughput)},
          {"estimator", estimator_name(c.estimator)},
          {"sweep", sweep}};
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  reject_unknown(j, "config",
                 {"network", "overhead", "coverage", "throughput", "estimator", "sweep"});
  ExperimentConfig c;
  if (j.contains("network")) c.network = parse_network(j.at("network"), "network");
  if (j.contains("overhead")) c.overhead = parse_overhead(j.at("overhead"), "overhead");
  if (j.contains("coverage")) c.coverage = parse_mapping(j.at("coverage"), "coverage", c.coverage);
  if (j.contains("throughput")) {
    c.throughput = parse_mapping(j.at("throughput"), "throughput", c.throughput);
  }
  if (j.contains("estimator")) c.estimator = parse_estimator(j.at("estimator"), "estimator");
  if (j.contains("sweep")) c.sweep = parse_sweep(j.at("sweep"), "sweep");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_json(const ExperimentConfig& config, int indent) {
  return encode(config).dump(indent);
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string text = to_json(config);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
  return hex.str();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace hetcomp
