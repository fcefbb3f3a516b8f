// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dqcsched/bench.hpp"
#include "rl_fixtures.hpp"

using namespace dqc;
using namespace dqc::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Outcome ac1() {
  struct Row {
    LinkQuality q;
    double ps, delay;
  };
  const Row rows[] = {{LinkQuality::Bad, 6.37e-3, 2.83e8},
                      {LinkQuality::Medium, 1.06e-2, 9.42e7},
                      {LinkQuality::Good, 2.99e-2, 6.67e6}};
  Outcome o;
  double worst = 0.0;
  for (const auto& r : rows) {
    const auto p = link_preset(r.q);
    const double ps = entanglement_success_probability(p);
    const double delay = state_delay(p.cycle_time_ns, ps);
    const double e1 = std::abs(ps - r.ps) / r.ps;
    const double e2 = std::abs(delay - r.delay) / r.delay;
    worst = std::max({worst, e1, e2});
    o.detail += std::string(to_string(r.q)) + " P_s=" + fmt(ps, 4) + " t=" + fmt(delay, 4) + "ns; ";
  }
  o.ok = worst < 0.01;
  o.detail += "max rel err " + fmt(worst, 3);
  return o;
}

Outcome from_message(const std::string& err, const std::string& ok_detail) {
  return err.empty() ? Outcome{true, ok_detail} : Outcome{false, err};
}

Outcome ac3(std::size_t n_queues) {
  std::size_t passed = 0, total = 0;
  std::string failures;
  for (const auto& c : scheduler_trace_checks()) {
    ++total;
    if (c.ok) {
      ++passed;
    } else {
      failures += " [" + c.name + "]";
    }
  }
  Outcome o{passed == total, std::to_string(passed) + "/" + std::to_string(total) + " traces"};
  for (auto k : {SchedulerKind::Fifo, SchedulerKind::List, SchedulerKind::ResourcePrioritize,
                 SchedulerKind::Epr, SchedulerKind::EprNodeSelection, SchedulerKind::Asap,
                 SchedulerKind::Ppo, SchedulerKind::PpoNodeSelection}) {
    const auto err = scheduler_invariants(k, n_queues, 1000 + static_cast<std::uint64_t>(k));
    if (!err.empty()) {
      o.ok = false;
      failures += " [" + err + "]";
    }
  }
  o.detail += ", invariants on " + std::to_string(n_queues) + " random queues x 8 schedulers" +
              failures;
  return o;
}

Outcome ac4() {
  const auto r = dominance_corpus(1000);
  Outcome o;
  o.ok = r.list_violations == 0 && r.asap_violations == 0;
  o.detail = std::to_string(r.instances) + " instances; LIST>FIFO on " +
             std::to_string(r.list_violations) + ", ASAP>FIFO on " +
             std::to_string(r.asap_violations);
  if (!r.first_list_violation.empty()) o.detail += "; first LIST case: " + r.first_list_violation;
  if (!r.first_asap_violation.empty()) o.detail += "; first ASAP case: " + r.first_asap_violation;
  return o;
}

// Paired (seed, slot) values of one metric per scheduler within one setting.
struct SettingData {
  std::map<std::string, std::vector<double>> values;
};

std::map<std::string, SettingData> collect(const std::vector<bench::SlotRecord>& records,
                                           double (*get)(const MetricsReport&)) {
  // Only slots where every scheduler produced metrics stay paired.
  std::map<std::tuple<std::string, std::uint64_t, std::size_t>,
           std::map<std::string, double>>
      by_slot;
  std::set<std::string> schedulers;
  for (const auto& r : records) {
    schedulers.insert(r.scheduler);
    if (r.metrics) by_slot[{r.setting, r.seed, r.slot}][r.scheduler] = get(*r.metrics);
  }
  std::map<std::string, SettingData> out;
  for (const auto& [key, m] : by_slot) {
    if (m.size() != schedulers.size()) continue;
    for (const auto& [s, v] : m) out[std::get<0>(key)].values[s].push_back(v);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Lower 2.5% bootstrap quantile of mean(better - worse) with `sign`
// orienting the comparison so that a positive value supports the claim.
double bootstrap_lower(const std::vector<double>& a, const std::vector<double>& b, double sign,
                       std::uint64_t seed) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = sign * (a[i] - b[i]);
  Rng rng(seed);
  const std::size_t reps = 2000;
  std::vector<double> means(reps);
  for (auto& m : means) {
    double s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += d[rng.uniform_index(d.size())];
    m = s / static_cast<double>(d.size());
  }
  std::sort(means.begin(), means.end());
  return means[static_cast<std::size_t>(0.025 * reps)];
}

// Claim: `who` beats every scheduler in `others` (lower when minimize).
Outcome best_of(const SettingData& data, const std::string& who,
                const std::vector<std::string>& others, bool minimize, const std::string& what) {
  Outcome o;
  const auto& mine = data.values.at(who);
  std::string weakest;
  double weakest_lb = INFINITY;
  for (const auto& other : others) {
    if (other == who) continue;
    const auto& theirs = data.values.at(other);
    const double lb = bootstrap_lower(theirs, mine, minimize ? 1.0 : -1.0, 77);
    if (lb <= 0.0) {
      o.ok = false;
      o.detail += " " + what + ": " + who + " " + fmt(mean(mine)) + " not better than " + other +
                  " " + fmt(mean(theirs)) + ";";
    }
    if (lb < weakest_lb) {
      weakest_lb = lb;
      weakest = other;
    }
  }
  if (o.ok) {
    o.detail = " " + what + ": " + who + " " + fmt(mean(mine)) + " vs runner-up " + weakest + " " +
               fmt(mean(data.values.at(weakest))) + ";";
  }
  return o;
}

std::vector<Outcome> ac5(const std::string& config_path, double& elapsed) {
  const auto t0 = Clock::now();
  auto config = bench::load_config(config_path);
  config.schedulers = {SchedulerKind::Fifo,             SchedulerKind::List,
                       SchedulerKind::ResourcePrioritize, SchedulerKind::Epr,
                       SchedulerKind::EprNodeSelection, SchedulerKind::Asap};
  const auto records = bench::run_experiment(config);
  const auto makespans = collect(records, [](const MetricsReport& m) {
    return static_cast<double>(m.makespan_ns);
  });
  const auto util = collect(records, [](const MetricsReport& m) { return m.qpu_utilization; });
  const auto selp = collect(records, [](const MetricsReport& m) { return m.selp; });
  const auto fair = collect(records, [](const MetricsReport& m) { return m.fairness; });
  const std::vector<std::string> all{"fifo", "list", "resource", "epr", "epr-ns", "asap"};

  Outcome a, b, c, d;
  bool saw_lambda8 = false;
  for (const auto& [setting, data] : makespans) {
    auto ra = best_of(data, "epr-ns", all, true, "[" + setting + "] makespan");
    a.ok = a.ok && ra.ok;
    a.detail += ra.detail;

    if (setting.rfind("lambda=8 ", 0) == 0) {
      saw_lambda8 = true;
      auto rb = best_of(util.at(setting), "resource", all, false, "[" + setting + "] U_QPU");
      b.ok = b.ok && rb.ok;
      b.detail += rb.detail;
    }

    auto rc1 = best_of(selp.at(setting), "epr", all, false, "[" + setting + "] SELP");
    auto rc2 = best_of(fair.at(setting), "epr", all, false, "[" + setting + "] fairness");
    c.ok = c.ok && rc1.ok && rc2.ok;
    c.detail += rc1.detail + rc2.detail;

    auto rd = best_of(data, "asap", {"fifo"}, true, "[" + setting + "] makespan");
    d.ok = d.ok && rd.ok;
    d.detail += rd.detail;
  }
  if (!saw_lambda8) {
    b.ok = false;
    b.detail = " no lambda=8 setting in the config";
  }
  if (makespans.size() != 4) {
    a.ok = false;
    a.detail += " expected four settings, found " + std::to_string(makespans.size());
  }
  elapsed = seconds_since(t0);
  return {a, b, c, d};
}

Outcome ac7(const std::string& ppo_config_path, std::size_t updates) {
  auto config = bench::load_config(ppo_config_path);
  rl::TrainingEnv env{bench::experiment_network(config, config.ppo.seed), {}, {}, config.exec,
                      config.ppo_node_selection};
  env.catalog = build_catalog(config.catalog, env.network, config.exec);
  env.workload.fixed_count = config.ppo.j_max;
  env.workload.bias_alpha = config.bias_alphas.front();
  const auto result = rl::train(env, config.ppo, updates);
  const auto untrained = rl::initial_policy(env, config.ppo);

  Outcome o;
  if (result.log.size() < 20) {
    return {false, "need at least 20 updates, got " + std::to_string(result.log.size())};
  }
  double first = 0, last = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    first += result.log[i].mean_reward / 10.0;
    last += result.log[result.log.size() - 10 + i].mean_reward / 10.0;
  }
  // Evaluation slots come from a stream the training never touched.
  Rng rng(derive_seed(config.ppo.seed, 17));
  double m_trained = 0, m_untrained = 0;
  const std::size_t n_eval = 100;
  for (std::size_t s = 0; s < n_eval; ++s) {
    const auto q = generate_slot_jobs(env.workload, env.catalog, s, rng);
    m_trained += static_cast<double>(makespan(
        rl::ppo_schedule(q, env.network, env.exec, result.policy, env.node_selection)));
    m_untrained += static_cast<double>(
        makespan(rl::ppo_schedule(q, env.network, env.exec, untrained, env.node_selection)));
  }
  m_trained /= n_eval;
  m_untrained /= n_eval;
  o.ok = last > first && m_trained <= m_untrained;
  o.detail = std::to_string(updates) + " updates; reward first-10 " + fmt(first, 5) +
             " -> last-10 " + fmt(last, 5) + "; makespan trained " + fmt(m_trained, 5) +
             " vs untrained " + fmt(m_untrained, 5) + " over " + std::to_string(n_eval) + " slots";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string config = "configs/desk.ini";
  std::string ppo_config;
  std::vector<std::string> only;
  std::size_t updates = 200;
  app.add_option("--config", config, "Desk experiment config (AC5)");
  app.add_option("--ppo-config", ppo_config,
                 "PPO config (AC7); defaults to ppo.ini next to --config");
  app.add_option("--only", only, "Run only these criteria, e.g. AC1 AC5");
  app.add_option("--updates", updates, "PPO updates for AC7");
  CLI11_PARSE(app, argc, argv);
  if (ppo_config.empty()) {
    const auto slash = config.find_last_of('/');
    ppo_config = (slash == std::string::npos ? std::string() : config.substr(0, slash + 1)) +
                 "ppo.ini";
  }
  auto wanted = [&](const std::string& id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };

  bool all_ok = true;
  auto report = [&](const std::string& id, const std::string& title, Outcome o, double secs,
                    double budget) {
    if (secs > budget) {
      o.ok = false;
      o.detail += "; over the " + fmt(budget) + " s budget";
    }
    all_ok = all_ok && o.ok;
    std::cout << id << ' ' << (o.ok ? "PASS" : "FAIL") << "  " << title << " (" << fmt(secs, 3)
              << " s): " << o.detail << std::endl;
  };
  auto timed = [&](const std::string& id, const std::string& title, double budget, auto fn) {
    if (!wanted(id)) return;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, title, o, seconds_since(t0), budget);
  };

  timed("AC1", "link physics", 1.0, ac1);
  timed("AC2", "metric oracle suite", 10.0, [] {
    return from_message(metric_oracle_suite(10000, 2024), "10000 random schedules");
  });
  timed("AC3", "scheduler traces and invariants", 60.0, [] { return ac3(10000); });
  timed("AC4", "LIST/ASAP vs FIFO dominance", 60.0, ac4);

  if (wanted("AC5")) {
    const char* parts[] = {"AC5a", "AC5b", "AC5c", "AC5d"};
    const char* titles[] = {"epr-ns lowest makespan", "resource highest U_QPU at lambda=8",
                            "epr highest SELP and fairness", "asap makespan below fifo"};
    double elapsed = 0;
    try {
      const auto outcomes = ac5(config, elapsed);
      for (std::size_t i = 0; i < 4; ++i) {
        report(parts[i], titles[i], outcomes[i], elapsed, 600.0);
      }
    } catch (const std::exception& e) {
      report("AC5", "qualitative orderings", {false, std::string("exception: ") + e.what()},
             elapsed, 600.0);
    }
  }

  timed("AC6", "PPO machinery", 30.0, [] {
    Outcome o;
    std::size_t passed = 0, total = 0;
    for (const auto& c : ppo_machinery_checks()) {
      ++total;
      if (c.ok) {
        ++passed;
      } else {
        o.ok = false;
        o.detail += " [" + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "]";
      }
    }
    o.detail = std::to_string(passed) + "/" + std::to_string(total) + " checks" + o.detail;
    return o;
  });
  timed("AC7", "PPO training sanity", 900.0, [&] { return ac7(ppo_config, updates); });

  return all_ok ? 0 : 1;
}
