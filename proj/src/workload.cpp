#include "dqcsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "dqcsched/error.hpp"

namespace dqc {

JobDescriptor partition_job(const CircuitProfile& profile, std::size_t qpu_capacity,
                            const Network& network, const ExecModelParams& params) {
  if (qpu_capacity < 2) throw DomainError("qpu_capacity must be >= 2");
  JobDescriptor job;
  job.required_qpus = (profile.n_qubits + qpu_capacity - 1) / qpu_capacity;
  job.local_depth = profile.local_depth;
  for (const auto& gate : profile.two_qubit_gates) {
    const auto block_a = static_cast<std::uint32_t>(gate.a / qpu_capacity);
    const auto block_b = static_cast<std::uint32_t>(gate.b / qpu_capacity);
    if (block_a != block_b) {
      job.cross_block_gates.push_back(
          {std::min(block_a, block_b), std::max(block_a, block_b)});
    }
  }
  job.nonlocal_gates = job.cross_block_gates.size();
  job.epr_pairs = job.nonlocal_gates;
  job.profile = std::make_shared<const CircuitProfile>(profile);
  job.est_exec_ns = estimate_execution_time_nominal(job, network, params);
  return job;
}

std::size_t sample_arrival_count(double lambda, Rng& rng) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  std::size_t count = 0;
  double elapsed = 0.0;
  while (true) {
    elapsed += -std::log1p(-rng.uniform01());
    if (elapsed > lambda) return count;
    ++count;
  }
}

std::vector<double> selection_probabilities(std::size_t n, double bias_alpha) {
  if (n == 0) throw DomainError("selection over an empty catalog");
  if (!(bias_alpha >= 0.0 && bias_alpha <= 1.0)) {
    throw DomainError("bias_alpha must lie in [0, 1]");
  }
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::pow(static_cast<double>(i + 1), bias_alpha);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<CatalogEntry> default_catalog_entries() {
  std::vector<CatalogEntry> entries;
  for (std::size_t n : {5, 10, 15}) {
    for (auto kind : {CircuitKind::GHZ, CircuitKind::GraphState, CircuitKind::QAOA,
                      CircuitKind::QFT, CircuitKind::VQE}) {
      entries.push_back({kind, n, 1});
    }
  }
  return entries;
}

std::int64_t Catalog::max_est_exec_ns() const {
  std::int64_t best = 0;
  for (const auto& j : jobs) best = std::max(best, j.est_exec_ns);
  return best;
}

Catalog build_catalog(const std::vector<CatalogEntry>& entries,
                      const Network& network, const ExecModelParams& params) {
  if (entries.empty()) throw DomainError("catalog must not be empty");
  Catalog catalog;
  for (const auto& e : entries) {
    catalog.jobs.push_back(partition_job(build_circuit_profile(e.kind, e.n_qubits, e.reps),
                                         network.qpu_capacity(), network, params));
  }
  std::stable_sort(catalog.jobs.begin(), catalog.jobs.end(),
                   [](const JobDescriptor& a, const JobDescriptor& b) {
                     return a.nonlocal_gates < b.nonlocal_gates;
                   });
  for (const auto& job : catalog.jobs) {
    if (job.required_qpus > network.n_nodes()) {
      throw DomainError("catalog job " + job.label() + " needs " +
                        std::to_string(job.required_qpus) + " QPUs but the network has " +
                        std::to_string(network.n_nodes()));
    }
  }
  return catalog;
}

void WorkloadConfig::validate() const {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  if (!(bias_alpha >= 0.0 && bias_alpha <= 1.0)) {
    throw DomainError("bias_alpha must lie in [0, 1]");
  }
  if (n_slots < 1) throw DomainError("n_slots must be >= 1");
  if (min_qubits > max_qubits) throw DomainError("empty qubit range");
}

std::vector<JobDescriptor> generate_slot_jobs(const WorkloadConfig& config,
                                              const Catalog& catalog,
                                              std::size_t slot_index, Rng& rng) {
  if (catalog.jobs.empty()) throw DomainError("catalog must not be empty");
  const std::size_t count =
      config.fixed_count ? *config.fixed_count : sample_arrival_count(config.lambda, rng);
  const auto probs = selection_probabilities(catalog.jobs.size(), config.bias_alpha);
  std::vector<JobDescriptor> jobs;
  jobs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    JobDescriptor job = catalog.jobs[rng.categorical(probs)];
    job.id = (static_cast<JobId>(slot_index) << 32) | static_cast<JobId>(k);
    jobs.push_back(std::move(job));
  }
  return jobs;
}

}  // namespace dqc
