#ifndef EUQ_TESTS_TEST_HELPERS_HPP_
#define EUQ_TESTS_TEST_HELPERS_HPP_

#include <Eigen/Core>
#include <filesystem>
#include <random>
#include <string>

#include "euq/nn/network.hpp"

namespace euq_test {

// Locates a parameter block; fails the test caller when absent.
inline const euq::nn::ParamBlock* find_block(const euq::nn::ParamLayout& layout,
                                             euq::nn::ParamBlock::Role role, int layer = -1,
                                             int skip_src = -1) {
  for (const auto& b : layout.blocks) {
    if (b.role != role) continue;
    if (layer >= 0 && b.layer != layer) continue;
    if (skip_src >= 0 && b.skip_src != skip_src) continue;
    return &b;
  }
  return nullptr;
}

inline void set_block(Eigen::VectorXd& weights, const euq::nn::ParamBlock& block,
                      const Eigen::MatrixXd& value) {
  Eigen::Map<Eigen::MatrixXd>(weights.data() + block.offset, block.rows, block.cols) = value;
}

inline Eigen::MatrixXd get_block(const Eigen::VectorXd& weights,
                                 const euq::nn::ParamBlock& block) {
  return Eigen::Map<const Eigen::MatrixXd>(weights.data() + block.offset, block.rows, block.cols);
}

// Fresh directory under the system temp root, removed by the caller if at all.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path() /
                   ("euq_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace euq_test

#endif  // EUQ_TESTS_TEST_HELPERS_HPP_
