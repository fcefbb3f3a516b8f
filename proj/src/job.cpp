#include "dqcsched/job.hpp"

namespace dqc {

std::string JobDescriptor::label() const {
  if (!profile) return "job";
  return std::string(to_string(profile->kind)) + "-" + std::to_string(profile->n_qubits);
}

}  // namespace dqc
