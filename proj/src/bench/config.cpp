#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dqcsched/bench.hpp"
#include "dqcsched/error.hpp"

namespace dqc::bench {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Line numbers of "key = value" entries, keyed by "[section] key".
std::map<std::string, std::size_t> index_lines(std::string_view text) {
  std::map<std::string, std::size_t> lines;
  std::string section;
  std::size_t no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      lines.emplace("[" + section + "]", no);
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos) {
      lines.emplace("[" + section + "] " + trim(std::string_view(t).substr(0, eq)), no);
    }
  }
  return lines;
}

struct Field {
  std::string name;  // "[section] key"
  std::string value;
  std::size_t line;

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(message, name, line);
  }

  std::size_t as_size() const {
    std::size_t v = 0;
    const auto* end = value.data() + value.size();
    auto [p, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || p != end || value.empty()) {
      fail("expected a non-negative integer, got '" + value + "'");
    }
    return v;
  }

  std::uint64_t as_u64(std::string_view text) const {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || p != end || text.empty()) {
      fail("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
  }

  double to_double(const std::string& text) const {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || p != end || text.empty() || !std::isfinite(v)) {
      fail("expected a number, got '" + text + "'");
    }
    return v;
  }

  double as_double() const { return to_double(value); }

  std::vector<double> as_double_list() const {
    std::vector<double> out;
    for (const auto& item : split(value, ',')) out.push_back(to_double(item));
    return out;
  }

  bool as_bool() const {
    const std::string v = lower(value);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail("expected true or false, got '" + value + "'");
  }

  // "1-30", "1, 2, 5-7"
  std::vector<std::uint64_t> as_seed_list() const {
    std::vector<std::uint64_t> out;
    for (const auto& item : split(value, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        out.push_back(as_u64(item));
        continue;
      }
      const std::uint64_t lo = as_u64(trim(std::string_view(item).substr(0, dash)));
      const std::uint64_t hi = as_u64(trim(std::string_view(item).substr(dash + 1)));
      if (hi < lo) fail("descending seed range '" + item + "'");
      if (hi - lo >= 1000000) fail("seed range '" + item + "' is too large");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
    return out;
  }

  template <typename Fn>
  auto wrap(Fn&& fn) const {
    try {
      return fn(value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
};

std::vector<CatalogEntry> read_catalog_file(const Field& f, const std::string& base_dir) {
  std::filesystem::path p(f.value);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  std::ifstream in(p);
  if (!in) f.fail("cannot open catalog file '" + p.string() + "'");
  std::vector<CatalogEntry> out;
  std::size_t no = 0;
  for (std::string line; std::getline(in, line);) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    try {
      out.push_back(parse_catalog_entry(t));
    } catch (const std::exception& e) {
      throw ConfigError(p.string() + " line " + std::to_string(no) + ": " + e.what(), f.name,
                        f.line);
    }
  }
  return out;
}

}  // namespace

CatalogEntry parse_catalog_entry(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw std::invalid_argument("catalog entry '" + std::string(text) +
                                "' must look like KIND:QUBITS[:REPS]");
  }
  auto number = [&](const std::string& s) {
    std::size_t v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end || s.empty()) {
      throw std::invalid_argument("bad number '" + s + "' in catalog entry");
    }
    return v;
  };
  CatalogEntry e;
  e.kind = parse_circuit_kind(parts[0]);
  e.n_qubits = number(parts[1]);
  e.reps = parts.size() == 3 ? number(parts[2]) : 1;
  if (e.reps == 0) throw std::invalid_argument("catalog repetitions must be positive");
  return e;
}

std::string Setting::label() const {
  std::string s = mode == ArrivalMode::Poisson ? "lambda=" + format_double(lambda)
                                               : "fixed=" + std::to_string(fixed_count);
  return s + " alpha=" + format_double(bias_alpha);
}

std::vector<Setting> ExperimentConfig::settings() const {
  std::vector<Setting> out;
  const std::vector<double> rates = mode == ArrivalMode::Poisson ? lambdas : std::vector<double>{0};
  for (double l : rates) {
    for (double a : bias_alphas) {
      Setting s;
      s.mode = mode;
      s.lambda = l;
      s.fixed_count = fixed_count;
      s.bias_alpha = a;
      out.push_back(s);
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& m) { throw ConfigError(m, field); };
  if (n_nodes < 2) fail("[network] n_nodes", "at least two nodes are required");
  if (capacity < 2) fail("[network] capacity", "QPU capacity must be at least 2");
  if (comm_qubits < 1) fail("[network] comm_qubits", "must be positive");
  try {
    quality_mix.validate();
  } catch (const std::exception& e) {
    fail("[network] quality_mix", e.what());
  }
  if (mode == ArrivalMode::Poisson) {
    if (lambdas.empty()) fail("[workload] lambda", "at least one arrival rate is required");
    for (double l : lambdas) {
      if (!(l >= 0.0)) fail("[workload] lambda", "arrival rates must be non-negative");
    }
  } else if (fixed_count == 0) {
    fail("[workload] fixed_count", "must be positive in fixed mode");
  }
  if (bias_alphas.empty()) fail("[workload] bias_alpha", "at least one bias value is required");
  for (double a : bias_alphas) {
    if (!(a >= 0.0 && a <= 1.0)) fail("[workload] bias_alpha", "bias must lie in [0, 1]");
  }
  if (n_slots < 1) fail("[workload] n_slots", "at least one slot is required");
  if (catalog.empty()) fail("[workload] catalog", "the catalog is empty");
  for (const auto& e : catalog) {
    if (e.n_qubits < kMinCircuitQubits || e.n_qubits > kMaxCircuitQubits) {
      fail("[workload] catalog", "circuit size " + std::to_string(e.n_qubits) + " out of range");
    }
    const std::size_t blocks = (e.n_qubits + capacity - 1) / capacity;
    if (blocks > n_nodes) {
      fail("[workload] catalog", std::string(to_string(e.kind)) + "-" +
                                     std::to_string(e.n_qubits) + " needs " +
                                     std::to_string(blocks) + " QPUs but the network has " +
                                     std::to_string(n_nodes));
    }
  }
  try {
    exec.validate();
  } catch (const std::exception& e) {
    fail("[exec]", e.what());
  }
  if (schedulers.empty()) fail("[schedulers] names", "at least one scheduler is required");
  if (resource_enumeration_cap < 1 || resource_enumeration_cap > 24) {
    fail("[schedulers] resource_enumeration_cap", "must lie in [1, 24]");
  }
  if (seeds.empty()) fail("[replication] seeds", "at least one seed is required");
  try {
    ppo.validate();
  } catch (const std::exception& e) {
    fail("[ppo]", e.what());
  }
  const bool uses_ppo = std::any_of(schedulers.begin(), schedulers.end(), is_ppo);
  if (uses_ppo) {
    if (mode != ArrivalMode::Fixed) {
      fail("[schedulers] names", "PPO schedulers need fixed-count slots ([workload] mode = fixed)");
    }
    if (fixed_count > ppo.j_max) fail("[workload] fixed_count", "exceeds [ppo] j_max");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::string& source,
                              const std::string& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message(), "", e.line());
  }
  const auto lines = index_lines(text);
  ExperimentConfig c;
  bool lambda_set = false;
  bool fixed_count_set = false;

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      const std::string name = "[] " + section;
      auto it = lines.find(name);
      throw ConfigError("key outside any section", section, it == lines.end() ? 0 : it->second);
    }
    for (const auto& [key, node] : body) {
      const std::string name = "[" + section + "] " + key;
      auto it = lines.find(name);
      const Field f{name, trim(node.data()), it == lines.end() ? 0 : it->second};
      if (section == "network") {
        if (key == "n_nodes") c.n_nodes = f.as_size();
        else if (key == "capacity") c.capacity = f.as_size();
        else if (key == "comm_qubits") c.comm_qubits = f.as_size();
        else if (key == "quality_mix") {
          const auto w = f.as_double_list();
          if (w.size() != 3) f.fail("expected three weights: bad, medium, good");
          const double sum = w[0] + w[1] + w[2];
          if (!(w[0] >= 0 && w[1] >= 0 && w[2] >= 0 && sum > 0)) {
            f.fail("weights must be non-negative with a positive sum");
          }
          c.quality_mix = {w[0] / sum, w[1] / sum, w[2] / sum};
        } else if (key == "quality") {
          const std::string q = lower(f.value);
          if (q == "mixed") c.uniform_quality.reset();
          else if (q == "bad") c.uniform_quality = LinkQuality::Bad;
          else if (q == "medium") c.uniform_quality = LinkQuality::Medium;
          else if (q == "good") c.uniform_quality = LinkQuality::Good;
          else f.fail("expected mixed, bad, medium or good");
        } else f.fail("unknown key");
      } else if (section == "workload") {
        if (key == "mode") {
          const std::string m = lower(f.value);
          if (m == "poisson") c.mode = ArrivalMode::Poisson;
          else if (m == "fixed") c.mode = ArrivalMode::Fixed;
          else f.fail("expected poisson or fixed");
        } else if (key == "lambda") {
          c.lambdas = f.as_double_list();
          lambda_set = true;
        } else if (key == "fixed_count") {
          c.fixed_count = f.as_size();
          fixed_count_set = true;
        } else if (key == "bias_alpha") c.bias_alphas = f.as_double_list();
        else if (key == "n_slots") c.n_slots = f.as_size();
        else if (key == "catalog") {
          c.catalog.clear();
          for (const auto& item : split(f.value, ',')) {
            c.catalog.push_back(f.wrap([&](const std::string&) { return parse_catalog_entry(item); }));
          }
        } else if (key == "catalog_file") c.catalog = read_catalog_file(f, base_dir);
        else f.fail("unknown key");
      } else if (section == "exec") {
        if (key == "local_gate_ns") c.exec.local_gate_ns = f.as_double();
        else if (key == "epr_serialization") {
          c.exec.epr_serialization = f.wrap(
              [](const std::string& v) { return parse_epr_serialization(v); });
        } else if (key == "nominal_delay") {
          c.exec.nominal_delay = f.wrap([](const std::string& v) { return parse_nominal_delay(v); });
        } else f.fail("unknown key");
      } else if (section == "schedulers") {
        if (key == "names") {
          c.schedulers.clear();
          for (const auto& item : split(f.value, ',')) {
            c.schedulers.push_back(f.wrap([&](const std::string&) { return parse_scheduler_kind(item); }));
          }
        } else if (key == "resource_enumeration_cap") c.resource_enumeration_cap = f.as_size();
        else if (key == "epr_strict_order") c.epr_strict_order = f.as_bool();
        else f.fail("unknown key");
      } else if (section == "replication") {
        if (key == "seeds") c.seeds = f.as_seed_list();
        else f.fail("unknown key");
      } else if (section == "ppo") {
        auto& p = c.ppo;
        if (key == "weights") c.ppo_weights = f.value;
        else if (key == "updates") c.ppo_updates = f.as_size();
        else if (key == "node_selection") c.ppo_node_selection = f.as_bool();
        else if (key == "training_log") c.ppo_training_log = f.value;
        else if (key == "j_max") p.j_max = f.as_size();
        else if (key == "clip_eps") p.clip_eps = f.as_double();
        else if (key == "value_coef") p.value_coef = f.as_double();
        else if (key == "entropy_coef") p.entropy_coef = f.as_double();
        else if (key == "minibatch") p.minibatch = f.as_size();
        else if (key == "update_every") p.update_every = f.as_size();
        else if (key == "n_epochs") p.n_epochs = f.as_size();
        else if (key == "reward_variant") {
          p.reward_variant = f.wrap([](const std::string& v) { return rl::parse_reward_variant(v); });
        } else if (key == "alpha_reward") p.alpha_reward = f.as_double();
        else if (key == "gamma_pressure") p.gamma_pressure = f.as_double();
        else if (key == "beta_positional") p.beta_positional = f.as_double();
        else if (key == "latency_offset") {
          p.latency_offset = f.wrap([](const std::string& v) { return rl::parse_latency_offset(v); });
        } else if (key == "reward_assignment") {
          p.reward_assignment =
              f.wrap([](const std::string& v) { return rl::parse_reward_assignment(v); });
        } else if (key == "discount") p.discount = f.as_double();
        else if (key == "gae_lambda") p.gae_lambda = f.as_double();
        else if (key == "learning_rate") p.learning_rate = f.as_double();
        else if (key == "max_grad_norm") p.max_grad_norm = f.as_double();
        else if (key == "normalize_advantages") p.normalize_advantages = f.as_bool();
        else if (key == "hidden") {
          p.hidden.clear();
          for (const auto& item : split(f.value, ',')) {
            p.hidden.push_back(static_cast<std::size_t>(f.as_u64(item)));
          }
        } else if (key == "seed") p.seed = f.as_u64(f.value);
        else f.fail("unknown key");
      } else if (section == "output") {
        if (key == "dir") c.output_dir = f.value;
        else f.fail("unknown key");
      } else {
        throw ConfigError("unknown section [" + section + "]", "[" + section + "]",
                          lines.at("[" + section + "]"));
      }
    }
  }
  if (c.mode == ArrivalMode::Fixed && lambda_set) {
    throw ConfigError("lambda is not used in fixed mode", "[workload] lambda",
                      lines.at("[workload] lambda"));
  }
  if (c.mode == ArrivalMode::Poisson && fixed_count_set) {
    throw ConfigError("fixed_count needs mode = fixed", "[workload] fixed_count",
                      lines.at("[workload] fixed_count"));
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    auto it = lines.find(e.field());
    if (it != lines.end()) throw ConfigError(e.message(), e.field(), it->second);
    throw;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), path, dir.empty() ? "." : dir.string());
}

}  // namespace dqc::bench
