#pragma once

#include <cstdint>

namespace vddp::algebra {

// Per-thread group-operation counters. Counts only public API calls (an MSM
// of n terms counts as n exponentiations), not internal doublings.
struct OpCounts {
  std::uint64_t g1_add = 0;
  std::uint64_t g1_exp = 0;
  std::uint64_t g2_add = 0;
  std::uint64_t g2_exp = 0;
  std::uint64_t gt_mul = 0;
  std::uint64_t gt_exp = 0;
  std::uint64_t miller_loops = 0;
  std::uint64_t final_exps = 0;

  std::uint64_t total() const {
    return g1_add + g1_exp + g2_add + g2_exp + gt_mul + gt_exp + miller_loops + final_exps;
  }
  OpCounts operator-(const OpCounts& o) const {
    return {g1_add - o.g1_add,   g1_exp - o.g1_exp,     g2_add - o.g2_add,
            g2_exp - o.g2_exp,   gt_mul - o.gt_mul,     gt_exp - o.gt_exp,
            miller_loops - o.miller_loops, final_exps - o.final_exps};
  }
  bool operator==(const OpCounts&) const = default;
};

OpCounts& op_counts();

// Captures the counter delta over a scope.
class OpScope {
 public:
  OpScope() : start_(op_counts()) {}
  OpCounts delta() const { return op_counts() - start_; }

 private:
  OpCounts start_;
};

}  // namespace vddp::algebra
