// Weights file layout (all integers and floats little-endian):
//   magic "DQCPPOW\0", u32 version, u32 j_max, u32 n_features,
//   u32 actor_layers, u32 critic_layers, u32 n_tensors,
//   n_tensors x (u32 rows, u32 cols), then every tensor's f64 data row-major.
// Tensor 0 is the 1x5 input normalization (feature_scale, time_scale);
// then W and b of each actor layer, then W and b of each critic layer.

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "dqcsched/rl/ppo.hpp"

namespace dqc::rl {

namespace {

constexpr std::array<char, 8> kMagic{'D', 'Q', 'C', 'P', 'P', 'O', 'W', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("weights file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("weights file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

struct Dims {
  std::uint32_t rows;
  std::uint32_t cols;
};

void append_dims(const Mlp& net, std::vector<Dims>& dims) {
  const auto& s = net.layer_sizes();
  for (std::size_t l = 0; l + 1 < s.size(); ++l) {
    dims.push_back({static_cast<std::uint32_t>(s[l + 1]), static_cast<std::uint32_t>(s[l])});
    dims.push_back({static_cast<std::uint32_t>(s[l + 1]), 1});
  }
}

// Layer sizes implied by a run of (W, b) tensor dims.
std::vector<std::size_t> sizes_from_dims(const std::vector<Dims>& dims, std::size_t first,
                                         std::size_t layers) {
  std::vector<std::size_t> sizes;
  for (std::size_t l = 0; l < layers; ++l) {
    const Dims& w = dims[first + 2 * l];
    const Dims& b = dims[first + 2 * l + 1];
    if (b.rows != w.rows || b.cols != 1) throw std::runtime_error("weights file: bad bias shape");
    if (l == 0) {
      sizes.push_back(w.cols);
    } else if (w.cols != sizes.back()) {
      throw std::runtime_error("weights file: inconsistent layer shapes");
    }
    sizes.push_back(w.rows);
  }
  return sizes;
}

}  // namespace

void write_policy(std::ostream& out, const PpoPolicy& policy) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(policy.j_max));
  put_u32(out, static_cast<std::uint32_t>(kFeatures));
  put_u32(out, static_cast<std::uint32_t>(policy.actor.layer_count()));
  put_u32(out, static_cast<std::uint32_t>(policy.critic.layer_count()));
  std::vector<Dims> dims{{1, kFeatures + 1}};
  append_dims(policy.actor, dims);
  append_dims(policy.critic, dims);
  put_u32(out, static_cast<std::uint32_t>(dims.size()));
  for (const Dims& d : dims) {
    put_u32(out, d.rows);
    put_u32(out, d.cols);
  }
  for (double s : policy.feature_scale) put_f64(out, s);
  put_f64(out, policy.time_scale);
  // The flat parameter layout already is W then b per layer, row-major.
  for (double p : policy.actor.parameters()) put_f64(out, p);
  for (double p : policy.critic.parameters()) put_f64(out, p);
  if (!out) throw std::runtime_error("failed to write weights");
}

PpoPolicy read_policy(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a PPO weights file (bad magic)");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw std::runtime_error("unsupported weights file version " + std::to_string(version));
  }
  PpoPolicy p;
  p.j_max = get_u32(in);
  if (get_u32(in) != kFeatures) throw std::runtime_error("weights file: feature count must be 4");
  const std::uint32_t actor_layers = get_u32(in);
  const std::uint32_t critic_layers = get_u32(in);
  const std::uint32_t n_tensors = get_u32(in);
  if (actor_layers == 0 || critic_layers == 0 ||
      n_tensors != 1 + 2 * (actor_layers + critic_layers)) {
    throw std::runtime_error("weights file: tensor count does not match layer counts");
  }
  std::vector<Dims> dims(n_tensors);
  for (auto& d : dims) {
    d.rows = get_u32(in);
    d.cols = get_u32(in);
  }
  if (dims[0].rows != 1 || dims[0].cols != kFeatures + 1) {
    throw std::runtime_error("weights file: bad normalization tensor");
  }
  const auto actor_sizes = sizes_from_dims(dims, 1, actor_layers);
  const auto critic_sizes = sizes_from_dims(dims, 1 + 2 * actor_layers, critic_layers);
  const std::size_t in_size = p.j_max * kFeatures;
  if (actor_sizes.front() != in_size || actor_sizes.back() != p.j_max ||
      critic_sizes.front() != in_size || critic_sizes.back() != 1) {
    throw std::runtime_error("weights file: network shapes do not match j_max");
  }
  for (double& s : p.feature_scale) s = get_f64(in);
  p.time_scale = get_f64(in);
  p.actor = Mlp(actor_sizes);
  p.critic = Mlp(critic_sizes);
  for (double& v : p.actor.parameters()) v = get_f64(in);
  for (double& v : p.critic.parameters()) v = get_f64(in);
  return p;
}

void save_policy(const PpoPolicy& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_policy(out, policy);
}

PpoPolicy load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weights file '" + path + "'");
  return read_policy(in);
}

}  // namespace dqc::rl
