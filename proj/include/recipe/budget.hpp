#pragma once

#include <cstdint>
#include <string>

#include "recipe/error.hpp"

namespace recipe {

/// Upper bound on search-node expansions for one call. Exhausting it raises
/// ErrorCode::budget_exceeded, which callers must keep distinct from "no answer".
struct Budget {
  std::uint64_t max_expansions = 1'000'000;
};

class BudgetCounter {
 public:
  BudgetCounter(Budget budget, std::string what) : budget_(budget), what_(std::move(what)) {}

  void spend(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > budget_.max_expansions)
      throw Error(ErrorCode::budget_exceeded,
                  what_ + " gave up after " + std::to_string(budget_.max_expansions) + " expansions");
  }

  std::uint64_t used() const noexcept { return used_; }

 private:
  Budget budget_;
  std::string what_;
  std::uint64_t used_ = 0;
};

}  // namespace recipe
