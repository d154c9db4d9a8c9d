// Shared aliases and error type for the rcbij core.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace rcbij {

using i64 = long long;
using Rat = boost::rational<i64>;
using IntVec = std::vector<i64>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

enum class Err {
  InvalidArgument,
  Unsupported,
  Budget,
  Verify,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, Err kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

// Default cap on materialized crystal elements; raised via the CLI --budget flag.
inline constexpr i64 kDefaultBudget = 50000;

}  // namespace rcbij
