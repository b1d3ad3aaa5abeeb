#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgeharden/milp.hpp"

namespace edgeharden {

/// x = sum_k 2^k bits[k], enforced by one equality row.
struct BinaryExpansion {
  VarRef source;
  std::vector<VarRef> bits;
  std::int64_t bound = 0;
  std::size_t link_row = 0;
  std::uint32_t model = 0;

  int q() const noexcept { return static_cast<int>(bits.size()); }
};

/// Number of bits needed for integers in [0, L]: floor(log2 L) + 1.
int expansion_bits(std::int64_t bound);

/// Adds the bits of integer variable `x` in [0, L]. Throws ModelError when
/// L < 1, when x is continuous, or when its bounds leave [0, L].
BinaryExpansion binary_expand(MilpModel& model, VarRef x, std::int64_t bound,
                              const std::string& prefix);

/// T = t * xi for binary t and xi in [0, M]: T <= M t, T <= xi,
/// T >= xi - M (1 - t), T >= 0.
VarRef mccormick_bin_cont(MilpModel& model, VarRef t, VarRef xi, double big_m,
                          const std::string& name);

/// Y = y * x for binary y and integer x in [0, L]: Y <= L y, Y <= x,
/// Y >= x - L (1 - y), Y >= 0.
VarRef product_bin_int(MilpModel& model, VarRef y, VarRef x, double bound,
                       const std::string& name);

/// Expression equal to x^2 at integral points: sum_k 2^k (bits[k] * x).
LinExpr linearize_square(MilpModel& model, VarRef x, const BinaryExpansion& expansion,
                         std::int64_t bound, const std::string& prefix);

/// Robust row  max { u'zeta : A zeta <= v + psi z } <= b  for binary z.
/// A is m x n, psi is m x k, z has k entries. Dual multipliers are bounded
/// by `big_m`, which must dominate every optimal dual.
struct DduConstraintSpec {
  std::vector<std::vector<double>> a;
  std::vector<double> v;
  std::vector<std::vector<double>> psi;
  std::vector<VarRef> z;
  std::vector<double> u;
  double b = 0.0;
  double big_m = 0.0;
  std::string prefix = "ddu";
};

struct Dualization {
  std::vector<std::size_t> rows;
  std::vector<VarRef> pi;
  std::vector<VarRef> aux;
};

/// Product terms pi_i z_j linearized with full McCormick envelopes.
Dualization dualize_bigm(MilpModel& model, const DduConstraintSpec& spec);

/// Sign-split variant: one lower-bounding row per product, with pi_i z_j for
/// negative psi rewritten as pi_i - pi_i (1 - z_j).
Dualization dualize_enhanced(MilpModel& model, const DduConstraintSpec& spec);

}  // namespace edgeharden
