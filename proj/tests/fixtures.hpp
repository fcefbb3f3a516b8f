#pragma once

// Hand-traced scheduler examples, random instance generators and brute-force
// oracles shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dqcsched/metrics.hpp"
#include "dqcsched/rl/ppo.hpp"
#include "dqcsched/schedulers.hpp"
#include "dqcsched/workload.hpp"
#include "support.hpp"

namespace dqc::testing {

struct NamedCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

inline std::vector<JobId> stage_ids(const Schedule& s, std::size_t stage) {
  std::vector<JobId> ids;
  for (const auto& p : s.placements) {
    if (p.stage_index == stage) ids.push_back(p.job_id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline bool same_schedule(const Schedule& a, const Schedule& b) {
  if (a.release_ns != b.release_ns || a.placements.size() != b.placements.size() ||
      a.rejected.size() != b.rejected.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.placements.size(); ++i) {
    const auto& x = a.placements[i];
    const auto& y = b.placements[i];
    if (x.job_id != y.job_id || x.assigned_nodes != y.assigned_nodes || x.start_ns != y.start_ns ||
        x.finish_ns != y.finish_ns || x.stage_index != y.stage_index) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rejected.size(); ++i) {
    if (a.rejected[i].job_id != b.rejected[i].job_id) return false;
  }
  return true;
}

/// Uniform policy: zero actor weights give equal logits everywhere.
inline rl::PpoPolicy uniform_policy(std::size_t j_max, double time_scale = 1.0) {
  rl::PpoConfig cfg;
  cfg.j_max = j_max;
  cfg.hidden = {8};
  Rng rng(1);
  auto p = rl::PpoPolicy::create(cfg, {1.0, 1.0, 1.0, 1.0}, time_scale, rng);
  for (double& w : p.actor.parameters()) w = 0.0;
  return p;
}

/// Four-node network with per-pair link classes.
template <typename Fn>
Network build_network_from(Fn quality) {
  std::vector<LinkProfile> links;
  for (NodeId a = 0; a < 4; ++a) {
    for (NodeId b = a + 1; b < 4; ++b) links.push_back(LinkProfile::from_quality(quality(a, b)));
  }
  return Network(4, 3, std::move(links));
}

inline std::vector<NamedCheck> scheduler_trace_checks() {
  std::vector<NamedCheck> out;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };
  const ExecModelParams ex = unit_exec();
  const Network n4 = homogeneous_network(4);
  using Ids = std::vector<JobId>;

  {
    const std::vector<JobDescriptor> q{job(1, 2, 10), job(2, 2, 20), job(3, 3, 5)};
    const auto s = fifo_schedule(q, n4, ex);
    add("fifo: A,B share stage 0, C starts at 20, makespan 25",
        stage_ids(s, 0) == Ids{1, 2} && stage_ids(s, 1) == Ids{3} && s.find(3)->start_ns == 20 &&
            makespan(s) == 25);
    const auto r = resource_prioritize_schedule(q, n4, ex);
    add("resource: round 0 {A,B} (util 4), round 1 {C}",
        stage_ids(r, 0) == Ids{1, 2} && stage_ids(r, 1) == Ids{3});
  }
  {
    const auto s = fifo_schedule({}, n4, ex);
    add("fifo: empty queue gives an empty schedule", s.placements.empty() && s.rejected.empty());
    const std::vector<JobDescriptor> q{job(1, 4, 17)};
    const auto f = fifo_schedule(q, n4, ex);
    add("fifo: single full-width job starts at 0", f.find(1)->start_ns == 0 && makespan(f) == 17);
  }
  {
    const std::vector<JobDescriptor> q{job(1, 3, 10), job(2, 2, 5), job(3, 1, 10)};
    const auto s = list_schedule(q, n4, ex);
    add("list: stage 0 = {A,C}, B deferred to stage 1",
        stage_ids(s, 0) == Ids{1, 3} && stage_ids(s, 1) == Ids{2} && s.find(2)->start_ns == 10);
  }
  {
    const std::vector<JobDescriptor> q{job(1, 4, 3), job(2, 4, 9), job(3, 4, 1)};
    add("list: full-width jobs reproduce fifo",
        same_schedule(list_schedule(q, n4, ex), fifo_schedule(q, n4, ex)));
    const auto a = asap_schedule(q, n4, ex);
    add("asap: full-width jobs run serially in arrival order",
        a.find(1)->start_ns == 0 && a.find(2)->start_ns == 3 && a.find(3)->start_ns == 12);
  }
  {
    const std::vector<JobDescriptor> q{job(1, 2, 10), job(2, 2, 2), job(3, 2, 50)};
    const auto s = resource_prioritize_schedule(q, n4, ex);
    add("resource: equal utilization broken by smaller mean time",
        stage_ids(s, 0) == Ids{1, 2} && stage_ids(s, 1) == Ids{3});
    const std::vector<JobDescriptor> one{job(7, 3, 4)};
    add("resource: single job alone",
        stage_ids(resource_prioritize_schedule(one, n4, ex), 0) == Ids{7});
  }
  {
    const std::vector<JobDescriptor> q{job(1, 1, 5, 5), job(2, 1, 5, 0), job(3, 1, 5, 2)};
    const auto s = epr_schedule(q, homogeneous_network(2), ex);
    Ids order;
    for (const auto& p : s.placements) order.push_back(p.job_id);
    add("epr: processing order by ascending EPR pairs", order == Ids{2, 3, 1});
  }
  {
    const std::vector<JobDescriptor> q{job(1, 2, 5, 0), job(2, 3, 5, 1), job(3, 1, 5, 2)};
    const auto strict = epr_schedule(q, n4, ex, {false, true});
    const auto skip = epr_schedule(q, n4, ex, {false, false});
    add("epr strict: stage 0 = {A}", stage_ids(strict, 0) == Ids{1});
    add("epr skip: stage 0 = {A,C}", stage_ids(skip, 0) == Ids{1, 3});
  }
  {
    auto k3 = [](double w01, double w02, double w12) {
      return weighted_network(3, 3, [=](NodeId a, NodeId b) {
        if (a == 0 && b == 1) return w01;
        if (a == 0 && b == 2) return w02;
        return w12;
      });
    };
    JobDescriptor j;
    j.id = 1;
    j.required_qpus = 2;
    j.local_depth = 1;
    j.cross_block_gates = {{0, 1}};
    j.nonlocal_gates = j.epr_pairs = 1;
    const std::vector<JobDescriptor> q{j};
    const auto s = epr_schedule(q, k3(1, 5, 2), ex, {true, true});
    add("epr-ns: K3 {01:1,02:5,12:2} places the job on {0,1}",
        s.find(1)->assigned_nodes == std::vector<NodeId>{0, 1});
    const auto t = epr_schedule(q, k3(5, 1, 2), ex, {true, true});
    add("epr-ns: K3 {01:5,02:1,12:2} places the job on {0,2}",
        t.find(1)->assigned_nodes == std::vector<NodeId>{0, 2} && makespan(t) == 2);

    const NodeId all3[] = {0, 1, 2};
    add("select_nodes: K3 k=2 -> {0,1}",
        select_nodes(all3, 2, k3(1, 5, 2)) == std::vector<NodeId>{0, 1});
    const NodeId some[] = {2, 1};
    add("select_nodes: k=1 -> lowest free id", select_nodes(some, 1, k3(1, 5, 2)) ==
                                                   std::vector<NodeId>{1});
    auto k4 = [](NodeId odd) {
      return build_network_from([odd](NodeId a, NodeId b) {
        return (a == odd || b == odd) ? LinkQuality::Bad : LinkQuality::Good;
      });
    };
    const NodeId all4[] = {0, 1, 2, 3};
    add("select_nodes: good triangle {0,1,2} beats triples touching node 3",
        select_nodes(all4, 3, k4(3)) == std::vector<NodeId>{0, 1, 2});
    add("select_nodes: good triangle {1,2,3} beats triples touching node 0",
        select_nodes(all4, 3, k4(0)) == std::vector<NodeId>{1, 2, 3});
    add("select_nodes: insufficient free nodes is an error", [&] {
      try {
        select_nodes(some, 3, k3(1, 5, 2));
        return false;
      } catch (const std::exception&) {
        return true;
      }
    }());
  }
  {
    const std::vector<JobDescriptor> q{job(1, 2, 10), job(2, 2, 20), job(3, 2, 5)};
    const auto a = asap_schedule(q, n4, ex);
    const auto f = fifo_schedule(q, n4, ex);
    add("asap: C starts at 10 when A's nodes free, makespan 20",
        a.find(1)->start_ns == 0 && a.find(2)->start_ns == 0 && a.find(3)->start_ns == 10 &&
            makespan(a) == 20);
    add("fifo: same instance has makespan 25", makespan(f) == 25);
  }
  {
    const std::vector<JobDescriptor> q{job(1, 2, 10), job(2, 5, 20), job(3, 2, 5)};
    bool ok = true;
    for (auto kind : {SchedulerKind::Fifo, SchedulerKind::List, SchedulerKind::ResourcePrioritize,
                      SchedulerKind::Epr, SchedulerKind::Asap}) {
      Schedule s;
      switch (kind) {
        case SchedulerKind::Fifo: s = fifo_schedule(q, n4, ex); break;
        case SchedulerKind::List: s = list_schedule(q, n4, ex); break;
        case SchedulerKind::ResourcePrioritize: s = resource_prioritize_schedule(q, n4, ex); break;
        case SchedulerKind::Epr: s = epr_schedule(q, n4, ex); break;
        default: s = asap_schedule(q, n4, ex); break;
      }
      ok = ok && s.rejected.size() == 1 && s.rejected[0].job_id == 2 && s.placements.size() == 2 &&
           check_schedule(s, q, n4).empty();
    }
    add("oversized jobs are rejected individually by every scheduler", ok);
  }
  return out;
}

/// Random queue: synthetic jobs or catalog jobs, 0..max_jobs of them.
struct RandomInstance {
  Network network;
  std::vector<JobDescriptor> queue;
};

inline RandomInstance random_instance(std::uint64_t seed, std::size_t max_jobs) {
  Rng rng(derive_seed(seed, 99));
  const std::size_t n_nodes = 2 + rng.uniform_index(6);
  RandomInstance inst{build_network(n_nodes, 3, {}, derive_seed(seed, 1)), {}};
  const std::size_t n_jobs = rng.uniform_index(max_jobs + 1);
  if (rng.uniform01() < 0.5) {
    for (std::size_t i = 0; i < n_jobs; ++i) {
      inst.queue.push_back(job(i + 1, 1 + rng.uniform_index(n_nodes + 1),
                               1 + static_cast<std::int64_t>(rng.uniform_index(100)),
                               rng.uniform_index(20)));
    }
  } else {
    std::vector<CatalogEntry> entries;
    for (const auto& e : default_catalog_entries()) {
      if ((e.n_qubits + 2) / 3 <= n_nodes) entries.push_back(e);
    }
    const Catalog cat = build_catalog(entries, inst.network, ExecModelParams{});
    for (std::size_t i = 0; i < n_jobs; ++i) {
      JobDescriptor j = cat.jobs[rng.uniform_index(cat.jobs.size())];
      j.id = i + 1;
      inst.queue.push_back(j);
    }
  }
  return inst;
}

inline Schedule run_kind(SchedulerKind kind, std::span<const JobDescriptor> q, const Network& n,
                         const ExecModelParams& ex, const rl::PpoPolicy* policy = nullptr) {
  switch (kind) {
    case SchedulerKind::Fifo: return fifo_schedule(q, n, ex);
    case SchedulerKind::List: return list_schedule(q, n, ex);
    case SchedulerKind::ResourcePrioritize: return resource_prioritize_schedule(q, n, ex);
    case SchedulerKind::Epr: return epr_schedule(q, n, ex, {false, true});
    case SchedulerKind::EprNodeSelection: return epr_schedule(q, n, ex, {true, true});
    case SchedulerKind::Asap: return asap_schedule(q, n, ex);
    case SchedulerKind::Ppo: return rl::ppo_schedule(q, n, ex, *policy, false);
    case SchedulerKind::PpoNodeSelection: return rl::ppo_schedule(q, n, ex, *policy, true);
  }
  return {};
}

/// Conservation, capacity and determinism over `count` random queues.
/// Returns an empty string when every instance passes.
inline std::string scheduler_invariants(SchedulerKind kind, std::size_t count, std::uint64_t seed) {
  const ExecModelParams ex = unit_exec();
  const std::size_t max_jobs = is_ppo(kind) ? 5 : 12;
  const rl::PpoPolicy policy = uniform_policy(5, 100.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto inst = random_instance(derive_seed(seed, i), max_jobs);
    const Schedule a = run_kind(kind, inst.queue, inst.network, ex, &policy);
    const Schedule b = run_kind(kind, inst.queue, inst.network, ex, &policy);
    const std::string where = std::string(to_string(kind)) + " instance " + std::to_string(i) + ": ";
    if (auto err = check_schedule(a, inst.queue, inst.network); !err.empty()) return where + err;
    if (!same_schedule(a, b)) return where + "not deterministic";
    // Capacity at every start instant.
    for (const auto& p : a.placements) {
      std::size_t busy = 0;
      for (const auto& o : a.placements) {
        if (o.start_ns <= p.start_ns && p.start_ns < o.finish_ns) busy += o.assigned_nodes.size();
      }
      if (busy > inst.network.n_nodes()) return where + "capacity exceeded";
    }
    if (kind == SchedulerKind::Epr && !a.placements.empty()) {
      std::size_t stage0_min = SIZE_MAX;
      for (const auto& p : a.placements) {
        const auto& j = *std::find_if(inst.queue.begin(), inst.queue.end(),
                                      [&](const JobDescriptor& x) { return x.id == p.job_id; });
        if (p.stage_index == 0) stage0_min = std::min(stage0_min, j.epr_pairs);
      }
      for (const auto& p : a.placements) {
        const auto& j = *std::find_if(inst.queue.begin(), inst.queue.end(),
                                      [&](const JobDescriptor& x) { return x.id == p.job_id; });
        if (j.epr_pairs < stage0_min) return where + "later job uses fewer EPR pairs than stage 0";
      }
    }
  }
  return {};
}

/// Random valid schedule with at most `max_jobs` placements on 6 nodes.
inline Schedule random_schedule(Rng& rng, std::size_t max_jobs) {
  Schedule s;
  s.release_ns = static_cast<std::int64_t>(rng.uniform_index(50));
  const std::size_t n = 1 + rng.uniform_index(max_jobs);
  const bool all_at_release = rng.uniform01() < 0.2;
  std::vector<std::int64_t> avail(6, s.release_ns);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t q = 1 + rng.uniform_index(all_at_release ? 1 : 3);
    std::vector<NodeId> nodes;
    while (nodes.size() < q) {
      const auto c = static_cast<NodeId>(rng.uniform_index(6));
      if (std::find(nodes.begin(), nodes.end(), c) == nodes.end()) nodes.push_back(c);
    }
    std::sort(nodes.begin(), nodes.end());
    std::int64_t start = s.release_ns;
    for (NodeId x : nodes) start = std::max(start, avail[x]);
    if (!all_at_release) start += static_cast<std::int64_t>(rng.uniform_index(20));
    const std::int64_t dur = 1 + static_cast<std::int64_t>(rng.uniform_index(50));
    if (all_at_release && start != s.release_ns) break;
    for (NodeId x : nodes) avail[x] = start + dur;
    s.placements.push_back({i + 1, nodes, start, start + dur, i});
  }
  return s;
}

/// Pair-overlap time counted one nanosecond at a time.
inline std::int64_t sweep_overlap(const Schedule& s) {
  std::int64_t lo = INT64_MAX, hi = INT64_MIN;
  for (const auto& p : s.placements) {
    lo = std::min(lo, p.start_ns);
    hi = std::max(hi, p.finish_ns);
  }
  std::int64_t total = 0;
  for (std::int64_t t = lo; t < hi; ++t) {
    std::int64_t c = 0;
    for (const auto& p : s.placements) c += p.start_ns <= t && t < p.finish_ns;
    total += c * (c - 1) / 2;
  }
  return total;
}

/// Runs the metric property suite on `count` random schedules; returns an
/// empty string on success.
inline std::string metric_oracle_suite(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Schedule s = random_schedule(rng, 6);
    const auto m = compute_metrics(s, 6);
    const std::string where = "case " + std::to_string(i) + ": ";
    const auto g = nonlocal_gate_density(s);
    if (g.t_overlap_ns != sweep_overlap(s)) return where + "T_overlap differs from sweep line";
    if (!(m.qpu_utilization >= 0.0 && m.qpu_utilization <= 1.0)) return where + "U_QPU out of range";
    if (!(m.nonlocal_gate_density >= 0.0 && m.nonlocal_gate_density <= 1.0)) {
      return where + "U_g out of range";
    }
    double log_sum = 0.0;
    bool all_equal = true;
    for (double e : m.elp) {
      log_sum += std::log(e);
      all_equal = all_equal && e == m.elp.front();
    }
    const double geo = std::exp(log_sum / static_cast<double>(m.elp.size()));
    if (std::abs(m.selp - geo) > 1e-12) return where + "SELP differs from exp(mean log)";
    if ((m.fairness == 1.0) != all_equal) return where + "fairness = 1 does not match equal ELPs";
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto& p : s.placements) {
      lo = std::min(lo, p.start_ns);
      hi = std::max(hi, p.finish_ns);
    }
    if (m.makespan_ns != hi - lo) return where + "makespan mismatch";
  }
  return {};
}

struct DominanceResult {
  std::size_t instances = 0;
  std::size_t list_violations = 0;
  std::size_t asap_violations = 0;
  std::string first_list_violation;
  std::string first_asap_violation;
};

/// Paired FIFO/LIST/ASAP makespans on homogeneous six-node networks with
/// desk-scale catalog slots (lambda alternating 5 and 8).
inline DominanceResult dominance_corpus(std::size_t count) {
  DominanceResult r;
  const ExecModelParams ex;
  const LinkQuality qualities[] = {LinkQuality::Bad, LinkQuality::Medium, LinkQuality::Good};
  for (std::size_t i = 0; i < count; ++i) {
    const Network net = build_uniform_network(6, 3, qualities[i % 3]);
    const Catalog cat = build_catalog(default_catalog_entries(), net, ex);
    WorkloadConfig wl;
    wl.lambda = i % 2 ? 8.0 : 5.0;
    Rng rng(derive_seed(2024, i));
    const auto q = generate_slot_jobs(wl, cat, i, rng);
    ++r.instances;
    if (q.empty()) continue;
    const auto f = makespan(fifo_schedule(q, net, ex));
    const auto l = makespan(list_schedule(q, net, ex));
    const auto a = makespan(asap_schedule(q, net, ex));
    auto describe = [&](std::int64_t other) {
      std::string d = "instance " + std::to_string(i) + " fifo=" + std::to_string(f) +
                      " other=" + std::to_string(other) + " jobs:";
      for (const auto& j : q) d += " " + j.label() + "(q" + std::to_string(j.required_qpus) + ")";
      return d;
    };
    if (l > f && r.list_violations++ == 0) r.first_list_violation = describe(l);
    if (a > f && r.asap_violations++ == 0) r.first_asap_violation = describe(a);
  }
  return r;
}

}  // namespace dqc::testing
